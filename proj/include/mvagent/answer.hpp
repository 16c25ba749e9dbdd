#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mvagent/geometry.hpp"
#include "mvagent/task.hpp"

namespace mvagent {

// Structured model output: "Task: <name>. Azimuth: [d1, ..., dn]. Caption: <text>".
// Azimuths are held on the two-decimal serialization grid.
struct Answer {
  TaskKind task = TaskKind::ImgAround;
  std::vector<Azimuth> azimuths;
  std::optional<std::string> caption;

  friend bool operator==(const Answer&, const Answer&) = default;
};

Answer make_answer(TaskKind task, const std::vector<double>& degrees,
                   std::optional<std::string> caption = std::nullopt);

// Throws DomainError for an empty azimuth list, an I-degree answer without
// exactly two azimuths, or a caption that is empty, multi-line or untrimmed.
std::string format_answer(const Answer& answer);

enum class AnswerErrorKind { MissingField, UnknownTask, MalformedAzimuthList, EmptyAzimuthList, TrailingGarbage };

std::string_view to_string(AnswerErrorKind kind);

struct AnswerError {
  AnswerErrorKind kind;
  // Field name for MissingField ("task" / "azimuth"), offending token for UnknownTask.
  std::string detail;
  // Index of the offending list element for MalformedAzimuthList.
  std::optional<std::size_t> position;
  // Byte range [offset, end) of the problem in the input.
  std::size_t offset = 0;
  std::size_t end = 0;

  std::string message() const;
};

using ParsedAnswer = std::variant<Answer, AnswerError>;

// Total: every input yields an Answer or an AnswerError, never an exception.
ParsedAnswer parse_answer(std::string_view text);

enum class FindingKind { TaskMismatch, ArityViolation, MissingCaption, UnexpectedCaption };

std::string_view to_string(FindingKind kind);

struct Finding {
  FindingKind kind;
  std::string message;
};

struct AnswerValidation {
  std::vector<Finding> violations;
  std::vector<Finding> warnings;

  bool ok() const { return violations.empty(); }
};

// expected_views is the azimuth count implied by the instruction (n for around
// tasks, number of viewpoints for specific tasks) when known.
AnswerValidation validate_answer(const Answer& answer, TaskKind expected,
                                 std::optional<std::size_t> expected_views = std::nullopt);

}  // namespace mvagent
