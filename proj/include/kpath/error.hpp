#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kpath {

// Malformed input text (edge lists, partition files). Carries the 1-based
// line number when one is known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Semantically invalid values: negative weights, zero kappa/rho, bad
// generator parameters.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Stream or file failure.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A benchmark spec that cannot be realized (stub matching failed, a degree
// does not fit any community).
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kpath
