#include "mvagent/dataset.hpp"

#include <cmath>
#include <cstdio>

#include "mvagent/error.hpp"

namespace mvagent {

TaskParams sample_params(TaskKind task, Rng& rng, const CaptionCorpus& corpus) {
  if (corpus.size() == 0) throw DomainError("caption corpus is empty");
  TaskParams p;
  if (is_around(task)) {
    p.n_views = 1 + static_cast<int>(uniform_below(rng, kMaxAroundViews));
  } else if (is_specific(task)) {
    // Uniform non-empty subset of the four viewpoints, then a uniform ordering.
    const auto mask = 1 + uniform_below(rng, 15);
    for (std::size_t i = 0; i < 4; ++i) {
      if (mask & (1u << i)) p.viewpoints.push_back(kAllViewpoints[i]);
    }
    for (std::size_t i = p.viewpoints.size(); i > 1; --i) {
      std::swap(p.viewpoints[i - 1], p.viewpoints[uniform_below(rng, i)]);
    }
  } else {
    // Integer in [-359, 359] without 0.
    auto d = static_cast<int>(uniform_below(rng, 718)) - 359;
    if (d >= 0) ++d;
    p.degree = Rotation(d);
  }
  p.caption = corpus.at(uniform_below(rng, corpus.size()));
  return p;
}

Answer ground_truth_for(TaskKind task, const TaskParams& params, Azimuth reference) {
  check_params(task, params);
  Answer a;
  a.task = task;
  if (is_around(task)) {
    a.azimuths = around_azimuths(*params.n_views);
  } else if (is_specific(task)) {
    for (Viewpoint v : params.viewpoints) a.azimuths.push_back(viewpoint_to_azimuth(v));
  } else {
    a.azimuths = {Azimuth::canonical(reference.degrees()),
                  Azimuth::canonical(rotate_azimuth(reference, *params.degree).degrees())};
  }
  if (carries_caption(task)) a.caption = params.caption;
  return a;
}

std::string record_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "mv-%06zu", index);
  return buf;
}

std::string reference_image_uri(const std::string& record_id) { return "asset://" + record_id + "/reference.png"; }

std::vector<InstructionRecord> generate_dataset(const DatasetSpec& spec) {
  if (spec.count == 0) throw DomainError("dataset count must be >= 1");
  double total = 0.0;
  for (double w : spec.task_weights) {
    if (!std::isfinite(w) || w < 0.0) throw DomainError("task weights must be finite and non-negative");
    total += w;
  }
  if (total <= 0.0) throw DomainError("task weights must not all be zero");

  Rng rng(spec.seed);
  std::vector<InstructionRecord> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    const double u = uniform_unit(rng) * total;
    double acc = 0.0;
    TaskKind task = kAllTasks.back();
    for (TaskKind t : kAllTasks) {
      const double w = spec.task_weights[task_index(t)];
      acc += w;
      if (w > 0.0 && u < acc) {
        task = t;
        break;
      }
    }
    // Rounding may leave u == total; fall back to the last weighted task.
    if (spec.task_weights[task_index(task)] == 0.0) {
      for (TaskKind t : kAllTasks) {
        if (spec.task_weights[task_index(t)] > 0.0) task = t;
      }
    }
    const int variant = static_cast<int>(uniform_below(rng, kVariantsPerTask));
    InstructionRecord r;
    r.id = record_id(i);
    r.task = task;
    r.variant_id = variant;
    r.params = sample_params(task, rng, spec.corpus);
    r.instruction = instantiate_instruction(task, r.params, variant);
    if (needs_image(task)) r.image_ref = reference_image_uri(r.id);
    r.ground_truth = ground_truth_for(task, r.params);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace mvagent
