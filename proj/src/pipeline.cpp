#include "mvagent/pipeline.hpp"

#include <unordered_map>

namespace mvagent {

std::vector<ResponseEntry> run_adapter(std::span<const InstructionRecord> dataset, ModelAdapter& adapter,
                                       std::size_t jobs) {
  std::vector<ResponseEntry> out(dataset.size());
  parallel_for(dataset.size(), jobs, [&](std::size_t i) {
    const auto& record = dataset[i];
    ResponseEntry& entry = out[i];
    entry.id = record.id;
    try {
      entry.answer_text = adapter.respond({record.id, record.instruction, record.image_ref}).answer_text;
    } catch (const AdapterError& e) {
      entry.error_code = std::string(to_string(e.code));
      entry.error_message = e.what();
    } catch (const std::exception& e) {
      entry.error_code = "adapter_failure";
      entry.error_message = e.what();
    }
  });
  return out;
}

Json stage_error_to_json(const StageError& error) {
  Json j;
  j["id"] = error.id;
  j["error"] = {{"code", error.code}, {"message", error.message}};
  return j;
}

PlanningOutcome plan_responses(std::span<const InstructionRecord> dataset, std::span<const ResponseEntry> responses,
                               const CameraConfig& config) {
  std::unordered_map<std::string, const ResponseEntry*> by_id;
  for (const auto& r : responses) by_id.emplace(r.id, &r);

  PlanningOutcome out;
  for (const auto& record : dataset) {
    const auto it = by_id.find(record.id);
    if (it == by_id.end() || !it->second->answer_text) {
      out.errors.push_back({record.id, "NoAnswer",
                            it == by_id.end() ? "no response for record"
                                              : "adapter error: " + it->second->error_message.value_or("")});
      continue;
    }
    const ParsedAnswer parsed = parse_answer(*it->second->answer_text);
    if (const auto* err = std::get_if<AnswerError>(&parsed)) {
      out.errors.push_back({record.id, "Unparseable", err->message()});
      continue;
    }
    PlanContext context;
    context.plan_id = record.id;
    context.image_ref = record.image_ref;
    context.expected_task = record.task;
    if (record.params.n_views) {
      context.expected_views = static_cast<std::size_t>(*record.params.n_views);
    } else if (!record.params.viewpoints.empty()) {
      context.expected_views = record.params.viewpoints.size();
    }
    if (group_of(record.task) == TaskGroup::CaptionBased) context.caption = record.params.caption;
    try {
      out.plans.push_back(build_plan(std::get<Answer>(parsed), context, config));
    } catch (const PlanError& e) {
      out.errors.push_back({record.id, std::string(to_string(e.kind)), e.what()});
    }
  }
  return out;
}

DispatchOutcome dispatch_all(std::span<const GenerationPlan> plans, const std::map<BackendId, BackendClient>& clients,
                             std::size_t jobs) {
  std::vector<std::optional<GenerationResult>> results(plans.size());
  std::vector<std::optional<StageError>> errors(plans.size());
  parallel_for(plans.size(), jobs, [&](std::size_t i) {
    const auto& plan = plans[i];
    const auto client = clients.find(plan.backend);
    if (client == clients.end()) {
      errors[i] = StageError{plan.plan_id, "BackendUnavailable",
                             "no endpoint configured for " + std::string(to_string(plan.backend))};
      return;
    }
    try {
      results[i] = dispatch_plan(plan, client->second);
    } catch (const DispatchError& e) {
      errors[i] = StageError{plan.plan_id, std::string(to_string(e.kind)), e.what()};
    }
  });
  DispatchOutcome out;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    if (results[i]) out.results.push_back(std::move(*results[i]));
    if (errors[i]) out.errors.push_back(std::move(*errors[i]));
  }
  return out;
}

}  // namespace mvagent
