#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hwbdd {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed Gherkin source. Line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(std::string message, std::size_t line, std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t line_;
  std::size_t column_;
};

/// A numeric literal outside the range representable at the requested width.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Text that is not a well-formed literal, or a malformed VCD document.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace hwbdd
