#include "mvagent/answer.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "mvagent/error.hpp"

namespace mvagent {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool ieq(char a, char b) {
  return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
}

bool is_trimmed_line(std::string_view s) {
  if (s.empty() || is_space(s.front()) || is_space(s.back())) return false;
  return s.find_first_of("\r\n") == std::string_view::npos;
}

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  std::size_t pos() const { return pos_; }
  void seek(std::size_t p) { pos_ = p; }
  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }
  std::string_view text() const { return text_; }

  void skip_ws() {
    while (!done() && is_space(text_[pos_])) ++pos_;
  }

  bool eat(char c) {
    if (peek() != c || done()) return false;
    ++pos_;
    return true;
  }

  // "<label> ws* :" matched case-insensitively at the cursor.
  bool eat_label(std::string_view label) {
    std::size_t p = pos_;
    if (!label_at(p, label)) return false;
    pos_ = p;
    return true;
  }

  // True when "<label> ws* :" appears anywhere at or after the cursor.
  bool label_ahead(std::string_view label) const {
    for (std::size_t start = pos_; start < text_.size(); ++start) {
      std::size_t p = start;
      if (label_at(p, label)) return true;
    }
    return false;
  }

 private:
  bool label_at(std::size_t& p, std::string_view label) const {
    if (text_.size() - p < label.size()) return false;
    for (std::size_t i = 0; i < label.size(); ++i) {
      if (!ieq(text_[p + i], label[i])) return false;
    }
    std::size_t q = p + label.size();
    while (q < text_.size() && is_space(text_[q]) && text_[q] != '\n') ++q;
    if (q >= text_.size() || text_[q] != ':') return false;
    p = q + 1;
    return true;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

AnswerError error(AnswerErrorKind kind, std::size_t offset, std::size_t end, std::string detail = {},
                  std::optional<std::size_t> position = std::nullopt) {
  return AnswerError{kind, std::move(detail), position, offset, end};
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// [+-]? digits ('.' digit{1,2})?
std::optional<double> read_degrees(Cursor& cur) {
  const std::string_view text = cur.text();
  std::size_t p = cur.pos();
  const std::size_t start = p;
  if (p < text.size() && (text[p] == '+' || text[p] == '-')) ++p;
  const std::size_t int_start = p;
  while (p < text.size() && is_digit(text[p])) ++p;
  if (p == int_start) return std::nullopt;
  if (p < text.size() && text[p] == '.') {
    const std::size_t frac_start = ++p;
    while (p < text.size() && is_digit(text[p])) ++p;
    const std::size_t frac = p - frac_start;
    if (frac < 1 || frac > 2) return std::nullopt;
  }
  // from_chars rejects a leading '+'.
  const std::size_t num_start = text[start] == '+' ? start + 1 : start;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data() + num_start, text.data() + p, value);
  if (ec != std::errc{} || ptr != text.data() + p || !std::isfinite(value)) return std::nullopt;
  cur.seek(p);
  return value;
}

}  // namespace

Answer make_answer(TaskKind task, const std::vector<double>& degrees, std::optional<std::string> caption) {
  Answer a{task, {}, std::move(caption)};
  a.azimuths.reserve(degrees.size());
  for (double d : degrees) a.azimuths.push_back(Azimuth::canonical(d));
  return a;
}

std::string format_answer(const Answer& answer) {
  if (answer.azimuths.empty()) throw DomainError("answer must carry at least one azimuth");
  if (answer.task == TaskKind::ImgDegree && answer.azimuths.size() != 2) {
    throw DomainError("I-degree answers carry exactly two azimuths");
  }
  if (answer.caption && !is_trimmed_line(*answer.caption)) {
    throw DomainError("caption must be a non-empty, trimmed, single line");
  }
  std::string out = "Task: ";
  out += short_name(answer.task);
  out += ". Azimuth: [";
  for (std::size_t i = 0; i < answer.azimuths.size(); ++i) {
    if (i) out += ", ";
    out += format_degrees(Azimuth::canonical(answer.azimuths[i].degrees()).degrees());
  }
  out += "].";
  if (answer.caption) {
    out += " Caption: ";
    out += *answer.caption;
  }
  return out;
}

std::string_view to_string(AnswerErrorKind kind) {
  switch (kind) {
    case AnswerErrorKind::MissingField: return "MissingField";
    case AnswerErrorKind::UnknownTask: return "UnknownTask";
    case AnswerErrorKind::MalformedAzimuthList: return "MalformedAzimuthList";
    case AnswerErrorKind::EmptyAzimuthList: return "EmptyAzimuthList";
    case AnswerErrorKind::TrailingGarbage: return "TrailingGarbage";
  }
  return "Unknown";
}

std::string AnswerError::message() const {
  std::string m(to_string(kind));
  if (!detail.empty()) m += "(" + detail + ")";
  if (position) m += " at element " + std::to_string(*position);
  m += " [bytes " + std::to_string(offset) + ", " + std::to_string(end) + ")";
  return m;
}

ParsedAnswer parse_answer(std::string_view text) {
  Cursor cur(text);
  const std::size_t n = text.size();

  cur.skip_ws();
  if (!cur.eat_label("task")) {
    const auto kind = cur.label_ahead("task") ? AnswerErrorKind::TrailingGarbage : AnswerErrorKind::MissingField;
    return error(kind, cur.pos(), n, kind == AnswerErrorKind::MissingField ? "task" : "");
  }
  cur.skip_ws();
  const std::size_t token_start = cur.pos();
  while (!cur.done()) {
    const char c = cur.peek();
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')) break;
    cur.seek(cur.pos() + 1);
  }
  const std::string_view token = text.substr(token_start, cur.pos() - token_start);
  const auto task = parse_task_name(token);
  if (!task) return error(AnswerErrorKind::UnknownTask, token_start, cur.pos(), std::string(token));
  cur.skip_ws();
  cur.eat('.');
  cur.skip_ws();

  if (!cur.eat_label("azimuth")) {
    const auto kind =
        cur.label_ahead("azimuth") ? AnswerErrorKind::TrailingGarbage : AnswerErrorKind::MissingField;
    return error(kind, cur.pos(), n, kind == AnswerErrorKind::MissingField ? "azimuth" : "");
  }
  cur.skip_ws();
  const std::size_t list_start = cur.pos();
  if (!cur.eat('[')) return error(AnswerErrorKind::MalformedAzimuthList, cur.pos(), cur.pos() + 1, {}, 0);
  cur.skip_ws();
  if (cur.eat(']')) return error(AnswerErrorKind::EmptyAzimuthList, list_start, cur.pos());

  Answer answer;
  answer.task = *task;
  for (std::size_t index = 0;; ++index) {
    cur.skip_ws();
    const std::size_t item_start = cur.pos();
    const auto value = read_degrees(cur);
    if (!value) {
      return error(AnswerErrorKind::MalformedAzimuthList, item_start, std::min(item_start + 1, n), {}, index);
    }
    answer.azimuths.push_back(Azimuth::canonical(*value));
    cur.skip_ws();
    if (cur.eat(',')) continue;
    if (cur.eat(']')) break;
    return error(AnswerErrorKind::MalformedAzimuthList, cur.pos(), std::min(cur.pos() + 1, n), {}, index);
  }
  cur.skip_ws();
  cur.eat('.');
  cur.skip_ws();
  if (cur.done()) return answer;

  const std::size_t caption_label = cur.pos();
  if (!cur.eat_label("caption")) return error(AnswerErrorKind::TrailingGarbage, caption_label, n);
  std::size_t line_end = text.find_first_of("\r\n", cur.pos());
  if (line_end == std::string_view::npos) line_end = n;
  std::string_view caption = text.substr(cur.pos(), line_end - cur.pos());
  while (!caption.empty() && is_space(caption.front())) caption.remove_prefix(1);
  while (!caption.empty() && is_space(caption.back())) caption.remove_suffix(1);
  cur.seek(line_end);
  cur.skip_ws();
  if (!cur.done()) return error(AnswerErrorKind::TrailingGarbage, cur.pos(), n);
  if (!caption.empty()) answer.caption = std::string(caption);
  return answer;
}

std::string_view to_string(FindingKind kind) {
  switch (kind) {
    case FindingKind::TaskMismatch: return "TaskMismatch";
    case FindingKind::ArityViolation: return "ArityViolation";
    case FindingKind::MissingCaption: return "MissingCaption";
    case FindingKind::UnexpectedCaption: return "UnexpectedCaption";
  }
  return "Unknown";
}

AnswerValidation validate_answer(const Answer& answer, TaskKind expected,
                                 std::optional<std::size_t> expected_views) {
  AnswerValidation v;
  if (answer.task != expected) {
    v.violations.push_back({FindingKind::TaskMismatch, "expected task " + std::string(short_name(expected)) +
                                                           ", got " + std::string(short_name(answer.task))});
  }
  std::optional<std::size_t> arity = expected_views;
  if (expected == TaskKind::ImgDegree) arity = 2;
  if (arity && answer.azimuths.size() != *arity) {
    v.violations.push_back({FindingKind::ArityViolation, "expected " + std::to_string(*arity) + " azimuths, got " +
                                                             std::to_string(answer.azimuths.size())});
  }
  if (carries_caption(expected) && !answer.caption) {
    v.violations.push_back({FindingKind::MissingCaption, "caption required for this task"});
  } else if (!carries_caption(expected) && answer.caption) {
    v.warnings.push_back({FindingKind::UnexpectedCaption, "caption ignored for caption-based task"});
  }
  return v;
}

}  // namespace mvagent
