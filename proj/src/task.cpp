#include "mvagent/task.hpp"

#include <cctype>

namespace mvagent {

std::string_view short_name(TaskKind t) {
  switch (t) {
    case TaskKind::ImgAround: return "I-around";
    case TaskKind::ImgSpecific: return "I-specific";
    case TaskKind::TextAround: return "T-around";
    case TaskKind::TextSpecific: return "T-specific";
    case TaskKind::ImgDegree: return "I-degree";
  }
  return "I-around";
}

std::string_view to_string(TaskGroup g) {
  switch (g) {
    case TaskGroup::ImageBased: return "image-based";
    case TaskGroup::CaptionBased: return "caption-based";
    case TaskGroup::RelatedView: return "related-view";
  }
  return "image-based";
}

std::optional<TaskKind> parse_task_name(std::string_view token) {
  for (TaskKind t : kAllTasks) {
    const std::string_view name = short_name(t);
    if (name.size() != token.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < name.size() && same; ++i) {
      same = std::tolower(static_cast<unsigned char>(name[i])) ==
             std::tolower(static_cast<unsigned char>(token[i]));
    }
    if (same) return t;
  }
  return std::nullopt;
}

}  // namespace mvagent
