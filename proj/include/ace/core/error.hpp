#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ace {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input; carries the 1-based position of the problem.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t line, std::size_t column = 0)
      : Error(format(message, line, column)), line_(line), column_(column), detail_(std::move(message)) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  static std::string format(const std::string& message, std::size_t line, std::size_t column) {
    std::string out = "line " + std::to_string(line);
    if (column != 0) out += ", column " + std::to_string(column);
    return out + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ace
