#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "mvagent/task.hpp"
#include "mvagent/templates.hpp"

namespace mvagent {

struct UnrecognizedTemplate : public std::runtime_error {
  explicit UnrecognizedTemplate(const std::string& instruction)
      : std::runtime_error("instruction matches no known template: " + instruction) {}
};

struct ParsedInstruction {
  TaskKind task;
  TaskParams params;
  int variant_id;
};

// Inverse of instantiate_instruction over the whole template bank. Literal
// text matches case-insensitively; viewpoint names accept "back" for rear.
// Throws UnrecognizedTemplate.
ParsedInstruction parse_instruction(std::string_view text);

}  // namespace mvagent
