#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mvagent/answer.hpp"
#include "mvagent/corpus.hpp"
#include "mvagent/rng.hpp"
#include "mvagent/templates.hpp"

namespace mvagent {

struct InstructionRecord {
  std::string id;
  TaskKind task = TaskKind::ImgAround;
  std::string instruction;
  std::optional<std::string> image_ref;  // present iff the task needs a reference image
  TaskParams params;
  Answer ground_truth;
  int variant_id = 0;

  friend bool operator==(const InstructionRecord&, const InstructionRecord&) = default;
};

// Draws parameters for one sample. The draw order is fixed so a seeded Rng
// reproduces the same stream: n_views / viewpoints / degree, then caption.
TaskParams sample_params(TaskKind task, Rng& rng, const CaptionCorpus& corpus);

// Reference images are assumed to face front unless reference is given.
Answer ground_truth_for(TaskKind task, const TaskParams& params, Azimuth reference = Azimuth{});

struct DatasetSpec {
  std::size_t count = 1000;
  // Indexed by task_index(); non-negative, not all zero.
  std::array<double, 5> task_weights{1.0, 1.0, 1.0, 1.0, 1.0};
  std::uint64_t seed = 42;
  CaptionCorpus corpus = CaptionCorpus::synthetic();
};

std::vector<InstructionRecord> generate_dataset(const DatasetSpec& spec);

std::string record_id(std::size_t index);
std::string reference_image_uri(const std::string& record_id);

}  // namespace mvagent
