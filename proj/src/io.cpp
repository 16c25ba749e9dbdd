#include "mvagent/io.hpp"

#include <fstream>

#include "mvagent/dispatch.hpp"
#include "mvagent/error.hpp"

namespace mvagent {
namespace {

const nlohmann::json& member(const nlohmann::json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw DomainError(std::string("missing field ") + name);
  return j.at(name);
}

template <typename T>
T get(const nlohmann::json& j, const char* name) {
  try {
    return member(j, name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DomainError(std::string("bad field ") + name);
  }
}

std::optional<std::string> get_optional(const nlohmann::json& j, const char* name) {
  if (!j.is_object() || !j.contains(name) || j.at(name).is_null()) return std::nullopt;
  return get<std::string>(j, name);
}

TaskKind task_from(const nlohmann::json& j) {
  const auto name = get<std::string>(j, "task");
  const auto task = parse_task_name(name);
  if (!task) throw DomainError("unknown task " + name);
  return *task;
}

Json metric(std::optional<double> v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json answer_to_json(const Answer& answer) {
  Json j;
  j["task"] = short_name(answer.task);
  auto az = Json::array();
  for (Azimuth a : answer.azimuths) az.push_back(degrees_json(a.degrees()));
  j["azimuths"] = std::move(az);
  if (answer.caption) j["caption"] = *answer.caption;
  return j;
}

Answer answer_from_json(const nlohmann::json& j) {
  Answer a;
  a.task = task_from(j);
  const auto& az = member(j, "azimuths");
  if (!az.is_array() || az.empty()) throw DomainError("azimuths must be a non-empty array");
  for (const auto& d : az) {
    if (!d.is_number()) throw DomainError("azimuths must be numbers");
    a.azimuths.push_back(Azimuth::canonical(d.get<double>()));
  }
  a.caption = get_optional(j, "caption");
  return a;
}

Json params_to_json(const TaskParams& params) {
  Json j = Json::object();
  if (params.n_views) j["n_views"] = *params.n_views;
  if (!params.viewpoints.empty()) {
    auto vs = Json::array();
    for (Viewpoint v : params.viewpoints) vs.push_back(to_string(v));
    j["viewpoints"] = std::move(vs);
  }
  if (params.degree) j["degree"] = degrees_json(params.degree->degrees());
  if (params.caption) j["caption"] = *params.caption;
  return j;
}

TaskParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("params must be an object");
  TaskParams p;
  if (j.contains("n_views")) p.n_views = get<int>(j, "n_views");
  if (j.contains("viewpoints")) {
    for (const auto& name : member(j, "viewpoints")) {
      const auto v = name.is_string() ? parse_viewpoint(name.get<std::string>()) : std::nullopt;
      if (!v) throw DomainError("unknown viewpoint");
      p.viewpoints.push_back(*v);
    }
  }
  if (j.contains("degree")) p.degree = Rotation(get<double>(j, "degree"));
  p.caption = get_optional(j, "caption");
  return p;
}

Json record_to_json(const InstructionRecord& record) {
  Json j;
  j["id"] = record.id;
  j["task"] = short_name(record.task);
  j["instruction"] = record.instruction;
  if (record.image_ref) j["image_ref"] = *record.image_ref;
  j["params"] = params_to_json(record.params);
  j["ground_truth"] = answer_to_json(record.ground_truth);
  j["variant_id"] = record.variant_id;
  return j;
}

InstructionRecord record_from_json(const nlohmann::json& j) {
  InstructionRecord r;
  r.id = get<std::string>(j, "id");
  if (r.id.empty()) throw DomainError("record id must be non-empty");
  r.task = task_from(j);
  r.instruction = get<std::string>(j, "instruction");
  r.image_ref = get_optional(j, "image_ref");
  r.params = params_from_json(member(j, "params"));
  check_params(r.task, r.params);
  r.ground_truth = answer_from_json(member(j, "ground_truth"));
  r.variant_id = get<int>(j, "variant_id");
  std::optional<std::size_t> views;
  if (r.params.n_views) views = static_cast<std::size_t>(*r.params.n_views);
  if (!r.params.viewpoints.empty()) views = r.params.viewpoints.size();
  const auto check = validate_answer(r.ground_truth, r.task, views);
  if (!check.ok()) {
    throw DomainError("record " + r.id + ": inconsistent ground truth: " + check.violations.front().message);
  }
  if (needs_image(r.task) != r.image_ref.has_value()) {
    throw DomainError("record " + r.id + ": image_ref must be present exactly for image tasks");
  }
  return r;
}

Json response_to_json(const ResponseEntry& response) {
  Json j;
  j["id"] = response.id;
  if (response.answer_text) {
    j["answer_text"] = *response.answer_text;
  } else {
    j["error"] = {{"code", response.error_code.value_or("error")}, {"message", response.error_message.value_or("")}};
  }
  return j;
}

ResponseEntry response_from_json(const nlohmann::json& j) {
  ResponseEntry r;
  r.id = get<std::string>(j, "id");
  r.answer_text = get_optional(j, "answer_text");
  if (!r.answer_text) {
    if (!j.contains("error")) throw DomainError("response " + r.id + " has neither answer_text nor error");
    const auto& e = j.at("error");
    r.error_code = get_optional(e, "code");
    r.error_message = get_optional(e, "message");
  }
  return r;
}

Json report_to_json(const EvalReport& report) {
  Json j;
  j["tolerance"] = report.tolerance;
  j["samples"] = report.samples;
  j["parse_failures"] = report.parse_failures;
  j["cc_missing"] = report.cc_missing;
  Json per_task = Json::object();
  for (TaskKind t : kAllTasks) {
    const auto it = report.per_task.find(t);
    if (it == report.per_task.end()) continue;
    const auto& m = it->second;
    per_task[std::string(short_name(t))] = {{"TA", m.ta},           {"AA", m.aa},       {"CB", metric(m.cb)},
                                            {"CC", metric(m.cc)},   {"count", m.count}, {"cc_missing", m.cc_missing}};
  }
  j["per_task"] = std::move(per_task);
  const auto& a = report.aggregate;
  j["aggregate"] = {{"TA", a.ta}, {"AA", a.aa}, {"CB", metric(a.cb)}, {"CC", metric(a.cc)}, {"Avg", a.avg}};
  return j;
}

std::vector<nlohmann::json> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  std::vector<nlohmann::json> out;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw DomainError(path + ":" + std::to_string(line_no) + ": not a JSON object");
    }
    out.push_back(std::move(j));
  }
  return out;
}

void write_jsonl(const std::string& path, std::span<const Json> lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot write " + path);
  for (const auto& j : lines) out << j.dump() << '\n';
  if (!out) throw DomainError("write failed for " + path);
}

std::vector<InstructionRecord> read_dataset(const std::string& path) {
  std::vector<InstructionRecord> out;
  std::size_t line_no = 0;
  for (const auto& j : read_jsonl(path)) {
    ++line_no;
    try {
      out.push_back(record_from_json(j));
    } catch (const DomainError& e) {
      throw DomainError(path + ": record " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_dataset(const std::string& path, std::span<const InstructionRecord> records) {
  std::vector<Json> lines;
  lines.reserve(records.size());
  for (const auto& r : records) lines.push_back(record_to_json(r));
  write_jsonl(path, lines);
}

std::vector<ResponseEntry> read_responses(const std::string& path) {
  std::vector<ResponseEntry> out;
  for (const auto& j : read_jsonl(path)) out.push_back(response_from_json(j));
  return out;
}

void write_responses(const std::string& path, std::span<const ResponseEntry> responses) {
  std::vector<Json> lines;
  lines.reserve(responses.size());
  for (const auto& r : responses) lines.push_back(response_to_json(r));
  write_jsonl(path, lines);
}

}  // namespace mvagent
