#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "mvagent/error.hpp"
#include "mvagent/io.hpp"

using namespace mvagent;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "mvagent_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("answer and params JSON") {
  const auto a = make_answer(TaskKind::ImgDegree, {0, 12.5}, "a cup");
  CHECK(answer_to_json(a).dump() == R"({"task":"I-degree","azimuths":[0,12.5],"caption":"a cup"})");
  CHECK(answer_from_json(nlohmann::json::parse(answer_to_json(a).dump())) == a);
  CHECK_THROWS_AS(answer_from_json(nlohmann::json::parse(R"({"task":"I-degree","azimuths":[]})")), DomainError);
  CHECK_THROWS_AS(answer_from_json(nlohmann::json::parse(R"({"task":"nope","azimuths":[1]})")), DomainError);

  TaskParams p;
  p.viewpoints = {Viewpoint::Rear, Viewpoint::Left};
  p.caption = "x";
  CHECK(params_from_json(nlohmann::json::parse(params_to_json(p).dump())) == p);
}

TEST_CASE("response JSON") {
  const ResponseEntry ok{"mv-000001", "Task: T-around. Azimuth: [0].", {}, {}};
  const ResponseEntry bad{"mv-000002", {}, "timeout", "slow"};
  CHECK(response_to_json(ok).dump() == R"({"id":"mv-000001","answer_text":"Task: T-around. Azimuth: [0]."})");
  CHECK(response_to_json(bad).dump() == R"({"id":"mv-000002","error":{"code":"timeout","message":"slow"}})");
  CHECK(response_from_json(nlohmann::json::parse(response_to_json(ok).dump())) == ok);
  CHECK(response_from_json(nlohmann::json::parse(response_to_json(bad).dump())) == bad);
}

TEST_CASE("dataset files") {
  DatasetSpec spec;
  spec.count = 50;
  const auto records = generate_dataset(spec);
  const auto path = scratch("d.jsonl");
  write_dataset(path.string(), records);
  CHECK(read_dataset(path.string()) == records);

  const auto again = scratch("d2.jsonl");
  write_dataset(again.string(), read_dataset(path.string()));
  CHECK(slurp(path) == slurp(again));

  std::ofstream(scratch("broken.jsonl")) << slurp(path).substr(0, 300) << "\n{not json\n";
  try {
    read_dataset(scratch("broken.jsonl").string());
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("broken.jsonl:") != std::string::npos);
  }
  CHECK_THROWS_AS(read_dataset(scratch("absent.jsonl").string()), DomainError);

  // ground truth that disagrees with the params is refused
  auto j = record_to_json(records[0]);
  j["ground_truth"]["azimuths"] = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  CHECK_THROWS_AS(record_from_json(nlohmann::json::parse(j.dump())), DomainError);
}
