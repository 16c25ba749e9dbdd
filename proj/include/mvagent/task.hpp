#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace mvagent {

enum class TaskKind { ImgAround, ImgSpecific, TextAround, TextSpecific, ImgDegree };

enum class TaskGroup { ImageBased, CaptionBased, RelatedView };

inline constexpr std::array<TaskKind, 5> kAllTasks = {TaskKind::ImgAround, TaskKind::ImgSpecific,
                                                      TaskKind::TextAround, TaskKind::TextSpecific,
                                                      TaskKind::ImgDegree};

constexpr TaskGroup group_of(TaskKind t) {
  switch (t) {
    case TaskKind::ImgAround:
    case TaskKind::ImgSpecific: return TaskGroup::ImageBased;
    case TaskKind::TextAround:
    case TaskKind::TextSpecific: return TaskGroup::CaptionBased;
    case TaskKind::ImgDegree: return TaskGroup::RelatedView;
  }
  return TaskGroup::ImageBased;
}

constexpr bool is_around(TaskKind t) { return t == TaskKind::ImgAround || t == TaskKind::TextAround; }
constexpr bool is_specific(TaskKind t) {
  return t == TaskKind::ImgSpecific || t == TaskKind::TextSpecific;
}

// Image-based and related-view tasks answer with a caption of the reference image.
constexpr bool carries_caption(TaskKind t) { return group_of(t) != TaskGroup::CaptionBased; }
constexpr bool needs_image(TaskKind t) { return group_of(t) != TaskGroup::CaptionBased; }

constexpr std::size_t task_index(TaskKind t) { return static_cast<std::size_t>(t); }

// Short names used by the answer grammar: I-around, I-specific, T-around, T-specific, I-degree.
std::string_view short_name(TaskKind t);
std::string_view to_string(TaskGroup g);

// Case-insensitive match against the short names.
std::optional<TaskKind> parse_task_name(std::string_view token);

}  // namespace mvagent
