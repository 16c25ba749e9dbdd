#include "mvagent/corpus.hpp"

#include <array>
#include <fstream>
#include <string_view>

#include "mvagent/error.hpp"

namespace mvagent {
namespace {

constexpr std::array<std::string_view, 16> kColors = {"red",   "blue",   "green", "yellow", "black", "white",
                                                      "gray",  "orange", "purple", "pink",  "brown", "beige",
                                                      "teal",  "golden", "silver", "navy"};
constexpr std::array<std::string_view, 12> kMaterials = {"wooden", "metal",  "plastic", "ceramic",
                                                         "glass",  "leather", "stone",  "rubber",
                                                         "marble", "fabric", "bamboo", "porcelain"};
constexpr std::array<std::string_view, 40> kObjects = {
    "chair",  "mug",      "teapot",     "lamp",    "vase",       "robot",    "car",      "sofa",
    "table",  "bench",    "clock",      "kettle",  "guitar",     "helmet",   "backpack", "bicycle",
    "boot",   "bottle",   "bowl",       "cabinet", "camera",     "candle",   "crown",    "drum",
    "fan",    "globe",    "hammer",     "headphones", "jar",     "lantern",  "mailbox",  "microphone",
    "piano",  "radio",    "shoe",       "skateboard", "stool",   "suitcase", "trophy",   "typewriter"};
constexpr std::array<std::string_view, 11> kFeatures = {
    "",                    " with four legs",     " with a handle",     " with a round base",
    " with painted stripes", " with a glossy finish", " with rounded edges", " with a small lid",
    " with engraved patterns", " with a long spout", " with two wheels"};

constexpr std::size_t kSyntheticSize = kColors.size() * kMaterials.size() * kObjects.size() * kFeatures.size();

bool starts_with_vowel(std::string_view w) {
  return !w.empty() && std::string_view("aeiou").find(w.front()) != std::string_view::npos;
}

}  // namespace

CaptionCorpus CaptionCorpus::synthetic() {
  CaptionCorpus c;
  c.synthetic_ = true;
  return c;
}

CaptionCorpus CaptionCorpus::from_phrases(std::vector<std::string> phrases) {
  if (phrases.empty()) throw DomainError("caption corpus is empty");
  for (const auto& p : phrases) {
    if (p.empty() || p.find_first_of("\r\n") != std::string::npos || p.front() == ' ' || p.back() == ' ') {
      throw DomainError("caption corpus entries must be trimmed single lines");
    }
  }
  CaptionCorpus c;
  c.phrases_ = std::move(phrases);
  return c;
}

CaptionCorpus CaptionCorpus::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open caption corpus " + path);
  std::vector<std::string> phrases;
  for (std::string line; std::getline(in, line);) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    phrases.push_back(line.substr(first, last - first + 1));
  }
  return from_phrases(std::move(phrases));
}

std::size_t CaptionCorpus::size() const { return synthetic_ ? kSyntheticSize : phrases_.size(); }

std::string CaptionCorpus::at(std::size_t index) const {
  if (index >= size()) throw DomainError("caption index out of range");
  if (!synthetic_) return phrases_[index];
  const auto feature = kFeatures[index % kFeatures.size()];
  index /= kFeatures.size();
  const auto object = kObjects[index % kObjects.size()];
  index /= kObjects.size();
  const auto material = kMaterials[index % kMaterials.size()];
  index /= kMaterials.size();
  const auto color = kColors[index];
  std::string out = starts_with_vowel(color) ? "an " : "a ";
  out.append(color).append(" ").append(material).append(" ").append(object).append(feature);
  return out;
}

}  // namespace mvagent
