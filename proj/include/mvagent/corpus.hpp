#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mvagent {

// Source of reference captions. The built-in corpus is a combinatorial
// "<article> <color> <material> <object> [<feature>]" phrase space.
class CaptionCorpus {
 public:
  static CaptionCorpus synthetic();
  // Throws DomainError when phrases is empty or holds a blank/multi-line entry.
  static CaptionCorpus from_phrases(std::vector<std::string> phrases);
  static CaptionCorpus from_file(const std::string& path);

  std::size_t size() const;
  std::string at(std::size_t index) const;

 private:
  CaptionCorpus() = default;
  std::vector<std::string> phrases_;
  bool synthetic_ = false;
};

}  // namespace mvagent
