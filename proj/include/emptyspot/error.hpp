#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace emptyspot {

// Invalid argument values (sizes, probabilities, counts).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is well-typed but violates a structural requirement
// (disconnected graph, mismatched ranking/truth, empty dataset...).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A randomized generator exhausted its retry budget.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace emptyspot
