#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mvagent/geometry.hpp"
#include "mvagent/task.hpp"

namespace mvagent {

struct TaskParams {
  std::optional<int> n_views;        // *-around
  std::vector<Viewpoint> viewpoints;  // *-specific, instruction order
  std::optional<Rotation> degree;     // I-degree
  std::optional<std::string> caption;

  friend bool operator==(const TaskParams&, const TaskParams&) = default;
};

inline constexpr int kMaxAroundViews = 8;
inline constexpr int kVariantsPerTask = 3;

// Throws DomainError unless params carry exactly the fields task needs.
// Caption-based tasks additionally require a caption.
void check_params(TaskKind task, const TaskParams& params);

// The parameters recoverable from the instruction text alone: image-based
// instructions do not mention the caption.
TaskParams instruction_visible(TaskKind task, TaskParams params);

// Placeholders: <n> view count, <v> viewpoint list, <c> caption, <d> rotation.
struct TemplateVariant {
  TaskKind task;
  int variant_id;
  std::string_view text;
};

std::span<const TemplateVariant> template_bank();

std::string instantiate_instruction(TaskKind task, const TaskParams& params, int variant_id);

std::string format_viewpoints(std::span<const Viewpoint> viewpoints);

}  // namespace mvagent
