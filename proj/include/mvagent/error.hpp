#pragma once

#include <stdexcept>
#include <string>

namespace mvagent {

// Thrown when a value or argument falls outside an operation's domain.
struct DomainError : public std::invalid_argument {
  explicit DomainError(const std::string& message) : std::invalid_argument(message) {}
};

}  // namespace mvagent
