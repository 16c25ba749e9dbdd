#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "mvagent/adapters.hpp"
#include "mvagent/dataset.hpp"
#include "mvagent/dispatch.hpp"
#include "mvagent/io.hpp"
#include "mvagent/metrics.hpp"

namespace mvagent {

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

// One response per record, in dataset order. Adapter failures become error
// entries; requests may run concurrently but results are joined by index.
std::vector<ResponseEntry> run_adapter(std::span<const InstructionRecord> dataset, ModelAdapter& adapter,
                                       std::size_t jobs = 1);

struct StageError {
  std::string id;
  std::string code;
  std::string message;
};

Json stage_error_to_json(const StageError& error);

struct PlanningOutcome {
  std::vector<GenerationPlan> plans;  // dataset order
  std::vector<StageError> errors;     // records whose answer could not be planned
};

// Parses each response and builds a plan against the record it answers.
PlanningOutcome plan_responses(std::span<const InstructionRecord> dataset, std::span<const ResponseEntry> responses,
                               const CameraConfig& config);

struct DispatchOutcome {
  std::vector<GenerationResult> results;  // plan order, successes only
  std::vector<StageError> errors;
};

// Clients keyed by backend; a plan whose backend has no client is an error.
DispatchOutcome dispatch_all(std::span<const GenerationPlan> plans,
                             const std::map<BackendId, BackendClient>& clients, std::size_t jobs = 1);

}  // namespace mvagent
