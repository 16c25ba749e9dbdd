#include <doctest.h>

#include "mvagent/answer.hpp"
#include "mvagent/corpus.hpp"
#include "mvagent/error.hpp"
#include "mvagent/rng.hpp"

using namespace mvagent;

namespace {

Answer ok(const ParsedAnswer& p) {
  if (const auto* e = std::get_if<AnswerError>(&p)) FAIL("unexpected parse error: " << e->message());
  return std::get<Answer>(p);
}

AnswerError err(const ParsedAnswer& p) {
  REQUIRE(std::holds_alternative<AnswerError>(p));
  return std::get<AnswerError>(p);
}

Answer random_answer(Rng& rng, const CaptionCorpus& corpus) {
  Answer a;
  a.task = kAllTasks[uniform_below(rng, 5)];
  const std::size_t n = a.task == TaskKind::ImgDegree ? 2 : 1 + uniform_below(rng, 8);
  for (std::size_t i = 0; i < n; ++i) {
    a.azimuths.push_back(Azimuth::canonical(static_cast<double>(uniform_below(rng, 36000)) / 100.0));
  }
  switch (uniform_below(rng, 3)) {
    case 0: break;
    case 1: a.caption = corpus.at(uniform_below(rng, corpus.size())); break;
    default: a.caption = "it says: Task: I-around. Azimuth: [1]. ok"; break;
  }
  return a;
}

}  // namespace

TEST_CASE("format_answer examples") {
  CHECK(format_answer(make_answer(TaskKind::ImgAround, {0, 120, 240}, "a blue ceramic mug")) ==
        "Task: I-around. Azimuth: [0, 120, 240]. Caption: a blue ceramic mug");
  CHECK(format_answer(make_answer(TaskKind::TextSpecific, {270})) == "Task: T-specific. Azimuth: [270].");
  CHECK(format_answer(make_answer(TaskKind::ImgDegree, {0, 315}, "a toy robot")) ==
        "Task: I-degree. Azimuth: [0, 315]. Caption: a toy robot");
  CHECK(format_answer(make_answer(TaskKind::TextAround, {0, 51.428571, 102.857})) ==
        "Task: T-around. Azimuth: [0, 51.43, 102.86].");
}

TEST_CASE("format_answer rejects invalid answers") {
  CHECK_THROWS_AS(format_answer(make_answer(TaskKind::ImgAround, {})), DomainError);
  CHECK_THROWS_AS(format_answer(make_answer(TaskKind::ImgDegree, {0, 10, 20}, "x")), DomainError);
  CHECK_THROWS_AS(format_answer(make_answer(TaskKind::ImgAround, {0}, "")), DomainError);
  CHECK_THROWS_AS(format_answer(make_answer(TaskKind::ImgAround, {0}, " padded")), DomainError);
  CHECK_THROWS_AS(format_answer(make_answer(TaskKind::ImgAround, {0}, "two\nlines")), DomainError);
}

TEST_CASE("parse_answer examples") {
  const auto a = ok(parse_answer("Task: T-around. Azimuth: [0, 90, 180, 270]."));
  CHECK(a == make_answer(TaskKind::TextAround, {0, 90, 180, 270}));

  const auto b = ok(parse_answer("task: i-degree. azimuth: [0, -45]. caption: a chair"));
  CHECK(b == make_answer(TaskKind::ImgDegree, {0, 315}, "a chair"));

  const auto e = err(parse_answer("Task: I-around. Caption: x"));
  CHECK(e.kind == AnswerErrorKind::MissingField);
  CHECK(e.detail == "azimuth");
}

TEST_CASE("parse_answer tolerated deviations") {
  CHECK(ok(parse_answer("  \n TASK :I-Around Azimuth:[0,180] Caption:  a mug. with a dot.  \n")) ==
        make_answer(TaskKind::ImgAround, {0, 180}, "a mug. with a dot."));
  CHECK(ok(parse_answer("Task: T-specific. Azimuth: [+90.5, 360, 725.25]")) ==
        make_answer(TaskKind::TextSpecific, {90.5, 0, 5.25}));
  CHECK(ok(parse_answer("Task: T-around. Azimuth: [0]. Caption:")).caption == std::nullopt);
}

TEST_CASE("parse_answer error kinds and offsets") {
  SUBCASE("missing task") {
    const auto e = err(parse_answer("Azimuth: [0]"));
    CHECK(e.kind == AnswerErrorKind::MissingField);
    CHECK(e.detail == "task");
    CHECK(err(parse_answer("")).kind == AnswerErrorKind::MissingField);
  }
  SUBCASE("unknown task") {
    const std::string text = "Task: X-around. Azimuth: [0]";
    const auto e = err(parse_answer(text));
    CHECK(e.kind == AnswerErrorKind::UnknownTask);
    CHECK(e.detail == "X-around");
    CHECK(e.offset == 6);
    CHECK(e.end == 14);
  }
  SUBCASE("malformed list") {
    const std::string text = "Task: I-around. Azimuth: [0, x, 90]";
    const auto e = err(parse_answer(text));
    CHECK(e.kind == AnswerErrorKind::MalformedAzimuthList);
    CHECK(e.position == 1);
    CHECK(e.offset == text.find('x'));
    CHECK(err(parse_answer("Task: I-around. Azimuth: 0, 90")).kind == AnswerErrorKind::MalformedAzimuthList);
    CHECK(err(parse_answer("Task: I-around. Azimuth: [0, 90")).kind == AnswerErrorKind::MalformedAzimuthList);
    CHECK(err(parse_answer("Task: I-around. Azimuth: [0.125]")).kind == AnswerErrorKind::MalformedAzimuthList);
    CHECK(err(parse_answer("Task: I-around. Azimuth: [1e3]")).kind == AnswerErrorKind::MalformedAzimuthList);
  }
  SUBCASE("empty list") {
    const auto e = err(parse_answer("Task: I-around. Azimuth: [ ]"));
    CHECK(e.kind == AnswerErrorKind::EmptyAzimuthList);
    CHECK(e.offset == 25);
    CHECK(e.end == 28);
  }
  SUBCASE("reordered fields and trailing text") {
    CHECK(err(parse_answer("Azimuth: [0]. Task: I-around.")).kind == AnswerErrorKind::TrailingGarbage);
    CHECK(err(parse_answer("Task: I-around. Caption: x. Azimuth: [0]")).kind == AnswerErrorKind::TrailingGarbage);
    const std::string text = "Task: I-around. Azimuth: [0]. thanks";
    const auto e = err(parse_answer(text));
    CHECK(e.kind == AnswerErrorKind::TrailingGarbage);
    CHECK(e.offset == text.find("thanks"));
    CHECK(err(parse_answer("Task: I-around. Azimuth: [0]. Caption: a\nmore")).kind ==
          AnswerErrorKind::TrailingGarbage);
  }
}

TEST_CASE("validate_answer") {
  CHECK(validate_answer(make_answer(TaskKind::ImgDegree, {0, 45}, "x"), TaskKind::ImgDegree).violations.empty());

  const auto three = validate_answer(make_answer(TaskKind::ImgDegree, {0, 45, 90}, "x"), TaskKind::ImgDegree);
  REQUIRE(three.violations.size() == 1);
  CHECK(three.violations[0].kind == FindingKind::ArityViolation);

  const auto extra = validate_answer(make_answer(TaskKind::TextAround, {0, 180}, "x"), TaskKind::TextAround, 2);
  CHECK(extra.ok());
  REQUIRE(extra.warnings.size() == 1);
  CHECK(extra.warnings[0].kind == FindingKind::UnexpectedCaption);

  const auto wrong = validate_answer(make_answer(TaskKind::TextAround, {0}), TaskKind::ImgAround, 2);
  std::vector<FindingKind> kinds;
  for (const auto& f : wrong.violations) kinds.push_back(f.kind);
  CHECK(kinds == std::vector<FindingKind>{FindingKind::TaskMismatch, FindingKind::ArityViolation,
                                          FindingKind::MissingCaption});
}

TEST_CASE("property: format then parse round-trips 10^4 answers") {
  const auto corpus = CaptionCorpus::synthetic();
  Rng rng(2024);
  for (int i = 0; i < 10000; ++i) {
    const Answer a = random_answer(rng, corpus);
    const std::string text = format_answer(a);
    const auto parsed = parse_answer(text);
    REQUIRE_MESSAGE(std::holds_alternative<Answer>(parsed), text);
    REQUIRE_MESSAGE(std::get<Answer>(parsed) == a, text);
  }
}

TEST_CASE("property: parse_answer is total and format is a fixed point on its image") {
  Rng rng(7);
  const std::string alphabet = "Task:AzimuthCaption.[], -+0123456789 I-aroundT-specificdegree\n\t\r\x80\xff";
  std::size_t accepted = 0;
  for (int i = 0; i < 20000; ++i) {
    std::string text;
    const std::size_t len = uniform_below(rng, 80);
    const bool bytes = i % 2 == 0;
    for (std::size_t k = 0; k < len; ++k) {
      text += bytes ? static_cast<char>(uniform_below(rng, 256)) : alphabet[uniform_below(rng, alphabet.size())];
    }
    if (i % 5 == 0) text = "Task: I-around. Azimuth: [" + text;
    ParsedAnswer parsed;
    REQUIRE_NOTHROW(parsed = parse_answer(text));
    if (const auto* a = std::get_if<Answer>(&parsed)) {
      ++accepted;
      if (a->task == TaskKind::ImgDegree && a->azimuths.size() != 2) continue;
      const std::string once = format_answer(*a);
      const auto again = parse_answer(once);
      REQUIRE(std::holds_alternative<Answer>(again));
      REQUIRE(format_answer(std::get<Answer>(again)) == once);
    } else {
      const auto& e = std::get<AnswerError>(parsed);
      REQUIRE(e.offset <= e.end);
      REQUIRE(e.end <= text.size() + 1);
    }
  }
  CHECK(accepted < 20000);
}
