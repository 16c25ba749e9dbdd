#include "mvagent/templates.hpp"

#include <algorithm>
#include <array>

#include "mvagent/error.hpp"

namespace mvagent {
namespace {

// Variant 0 of each task is the reference wording.
constexpr std::array<TemplateVariant, 15> kBank = {{
    {TaskKind::ImgAround, 0,
     "Analyze the object in the image and provide a descriptive caption. Generate <n> images from different "
     "perspectives around the object."},
    {TaskKind::ImgAround, 1,
     "Describe the object shown in the image with a short caption. Then render <n> views evenly spaced around it."},
    {TaskKind::ImgAround, 2,
     "Look at the image, write a caption for the object, and produce <n> images of it from viewpoints all around "
     "the object."},

    {TaskKind::ImgSpecific, 0,
     "Please analyze the object in the image and provide a descriptive caption. Provide the image from the <v>."},
    {TaskKind::ImgSpecific, 1,
     "Write a descriptive caption for the object in the image. Show it from the <v> view."},
    {TaskKind::ImgSpecific, 2, "Caption the object in this image, then generate the image from the <v>."},

    {TaskKind::TextAround, 0,
     "Please generate images from <n> different perspectives around the object based on the description <c>."},
    {TaskKind::TextAround, 1,
     "Based on the description <c>, create <n> images of the object from different perspectives around it."},
    {TaskKind::TextAround, 2, "Generate <n> views around the object described as: <c>."},

    {TaskKind::TextSpecific, 0, "Please provide the images from the <v> based on the description <c>."},
    {TaskKind::TextSpecific, 1, "Using the description <c>, render the object from the <v>."},
    {TaskKind::TextSpecific, 2, "Show the <v> of the object described as: <c>."},

    {TaskKind::ImgDegree, 0,
     "Please analyze the object in the image and provide a descriptive caption. Provide the image with the camera "
     "rotated by <d> degrees."},
    {TaskKind::ImgDegree, 1,
     "Describe the object in the image with a caption. Rotate the camera by <d> degrees and provide the resulting "
     "image."},
    {TaskKind::ImgDegree, 2,
     "Give a descriptive caption for the object in this image, then show it after rotating the camera <d> degrees."},
}};

void replace_all(std::string& s, std::string_view from, const std::string& to) {
  for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) {
    s.replace(p, from.size(), to);
  }
}

}  // namespace

void check_params(TaskKind task, const TaskParams& params) {
  const std::string name(short_name(task));
  if (is_around(task) != params.n_views.has_value()) {
    throw DomainError(name + ": n_views must be present exactly for around tasks");
  }
  if (params.n_views && (*params.n_views < 1 || *params.n_views > kMaxAroundViews)) {
    throw DomainError(name + ": n_views must be in [1, 8]");
  }
  if (is_specific(task) != !params.viewpoints.empty()) {
    throw DomainError(name + ": viewpoints must be present exactly for specific tasks");
  }
  if (params.viewpoints.size() > 4) throw DomainError(name + ": at most four viewpoints");
  for (std::size_t i = 0; i < params.viewpoints.size(); ++i) {
    for (std::size_t j = i + 1; j < params.viewpoints.size(); ++j) {
      if (params.viewpoints[i] == params.viewpoints[j]) throw DomainError(name + ": duplicate viewpoint");
    }
  }
  if ((task == TaskKind::ImgDegree) != params.degree.has_value()) {
    throw DomainError(name + ": degree must be present exactly for the degree task");
  }
  if (group_of(task) == TaskGroup::CaptionBased && !params.caption) {
    throw DomainError(name + ": caption-based tasks require a caption");
  }
  if (params.caption && (params.caption->empty() || params.caption->find_first_of("\r\n") != std::string::npos)) {
    throw DomainError(name + ": caption must be a non-empty single line");
  }
}

TaskParams instruction_visible(TaskKind task, TaskParams params) {
  if (group_of(task) != TaskGroup::CaptionBased) params.caption.reset();
  return params;
}

std::span<const TemplateVariant> template_bank() { return kBank; }

std::string format_viewpoints(std::span<const Viewpoint> viewpoints) {
  std::string out;
  for (std::size_t i = 0; i < viewpoints.size(); ++i) {
    if (i) out += ", ";
    out += to_string(viewpoints[i]);
  }
  return out;
}

std::string instantiate_instruction(TaskKind task, const TaskParams& params, int variant_id) {
  check_params(task, params);
  const auto it = std::find_if(kBank.begin(), kBank.end(), [&](const TemplateVariant& v) {
    return v.task == task && v.variant_id == variant_id;
  });
  if (it == kBank.end()) {
    throw DomainError("unknown template variant " + std::to_string(variant_id) + " for " +
                      std::string(short_name(task)));
  }
  std::string text(it->text);
  if (params.n_views) replace_all(text, "<n>", std::to_string(*params.n_views));
  if (!params.viewpoints.empty()) replace_all(text, "<v>", format_viewpoints(params.viewpoints));
  if (params.degree) replace_all(text, "<d>", format_degrees(params.degree->degrees()));
  if (params.caption) replace_all(text, "<c>", *params.caption);
  return text;
}

}  // namespace mvagent
