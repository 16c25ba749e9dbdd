#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mvagent/adapters.hpp"
#include "mvagent/dispatch.hpp"
#include "mvagent/error.hpp"
#include "mvagent/instruction_parser.hpp"
#include "mvagent/io.hpp"
#include "mvagent/metrics.hpp"
#include "mvagent/pipeline.hpp"

namespace py = pybind11;
using namespace mvagent;

// Structured values cross the boundary as JSON text; the Python package
// decodes them.

namespace {

TaskKind task_arg(const std::string& name) {
  const auto t = parse_task_name(name);
  if (!t) throw DomainError("unknown task " + name);
  return *t;
}

std::vector<InstructionRecord> records_from(const std::vector<std::string>& lines) {
  std::vector<InstructionRecord> out;
  for (const auto& l : lines) out.push_back(record_from_json(nlohmann::json::parse(l)));
  return out;
}

std::string parse_answer_json(const std::string& text) {
  const auto parsed = parse_answer(text);
  Json j;
  if (const auto* a = std::get_if<Answer>(&parsed)) {
    j["answer"] = answer_to_json(*a);
  } else {
    const auto& e = std::get<AnswerError>(parsed);
    j["error"] = {{"kind", to_string(e.kind)}, {"detail", e.detail}, {"offset", e.offset}, {"end", e.end}};
    if (e.position) j["error"]["position"] = *e.position;
  }
  return j.dump();
}

std::string parse_instruction_json(const std::string& text) {
  const auto p = parse_instruction(text);
  Json j;
  j["task"] = short_name(p.task);
  j["params"] = params_to_json(p.params);
  j["variant_id"] = p.variant_id;
  return j.dump();
}

std::vector<std::string> generate_json(std::size_t count, std::uint64_t seed, std::vector<double> weights) {
  DatasetSpec spec;
  spec.count = count;
  spec.seed = seed;
  if (!weights.empty()) {
    if (weights.size() != spec.task_weights.size()) throw DomainError("expected one weight per task");
    std::copy(weights.begin(), weights.end(), spec.task_weights.begin());
  }
  std::vector<std::string> out;
  for (const auto& r : generate_dataset(spec)) out.push_back(record_to_json(r).dump());
  return out;
}

std::vector<std::string> answer_json(const std::vector<std::string>& dataset, double p_task_flip,
                                     double p_azimuth_jitter, double jitter_deg, double p_caption_shuffle,
                                     std::uint64_t seed) {
  const auto records = records_from(dataset);
  const auto captioner = std::make_shared<LookupCaptioner>(LookupCaptioner::from_records(records));
  CorruptionAdapter adapter(captioner, {p_task_flip, p_azimuth_jitter, jitter_deg, p_caption_shuffle}, seed);
  std::vector<std::string> out;
  for (const auto& r : run_adapter(records, adapter)) out.push_back(response_to_json(r).dump());
  return out;
}

py::tuple evaluate_json(const std::vector<std::string>& dataset, const std::vector<std::string>& responses,
                        double tolerance) {
  const auto records = records_from(dataset);
  std::vector<ResponseEntry> entries;
  for (const auto& l : responses) entries.push_back(response_from_json(nlohmann::json::parse(l)));
  BagOfWordsProvider provider;
  const auto report = evaluate(records, entries, tolerance, provider);
  return py::make_tuple(report_to_json(report).dump(), render_table(report));
}

std::string build_plan_json(const std::string& answer_text, const std::string& plan_id,
                            std::optional<std::string> image_ref, std::optional<std::string> caption,
                            double elevation, double radius, int resolution) {
  const auto parsed = parse_answer(answer_text);
  if (const auto* e = std::get_if<AnswerError>(&parsed)) throw DomainError("unparseable answer: " + e->message());
  PlanContext context;
  context.plan_id = plan_id;
  context.image_ref = std::move(image_ref);
  context.caption = std::move(caption);
  return encode_plan(build_plan(std::get<Answer>(parsed), context, {elevation, radius, resolution})).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Instruction datasets, answer grammar, metrics and backend routing";

  py::register_exception<PlanError>(m, "PlanError", PyExc_ValueError);
  py::register_exception<UnrecognizedTemplate>(m, "UnrecognizedTemplate", PyExc_ValueError);

  m.def("normalize_azimuth", [](double d) { return normalize_azimuth(d).degrees(); });
  m.def("around_azimuths", [](int n) {
    std::vector<double> out;
    for (auto a : around_azimuths(n)) out.push_back(a.degrees());
    return out;
  });
  m.def("format_answer",
        [](const std::string& task, const std::vector<double>& azimuths, std::optional<std::string> caption) {
          return format_answer(make_answer(task_arg(task), azimuths, std::move(caption)));
        },
        py::arg("task"), py::arg("azimuths"), py::arg("caption") = py::none());
  m.def("parse_answer", &parse_answer_json);
  m.def("parse_instruction", &parse_instruction_json);
  m.def("route", [](const std::string& task) { return std::string(to_string(route(task_arg(task)))); });
  m.def("generate_dataset", &generate_json, py::arg("count"), py::arg("seed"), py::arg("weights"));
  m.def("answer", &answer_json, py::arg("dataset"), py::arg("p_task_flip"), py::arg("p_azimuth_jitter"),
        py::arg("jitter_deg"), py::arg("p_caption_shuffle"), py::arg("seed"), py::call_guard<py::gil_scoped_release>());
  m.def("evaluate", &evaluate_json, py::arg("dataset"), py::arg("responses"), py::arg("tolerance"));
  m.def("caption_bleu", &caption_bleu);
  m.def("caption_similarity", [](const std::string& a, const std::string& b) {
    BagOfWordsProvider provider;
    return caption_similarity(a, b, provider);
  });
  m.def("build_plan", &build_plan_json, py::arg("answer_text"), py::arg("plan_id"), py::arg("image_ref"),
        py::arg("caption"), py::arg("elevation"), py::arg("radius"), py::arg("resolution"));
}
