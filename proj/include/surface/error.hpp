#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace surface {

// Input that violates a documented format or invariant. The CLI maps this to
// exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax error at a known position (1-based line and column).
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A file could not be read or written. Exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace surface
