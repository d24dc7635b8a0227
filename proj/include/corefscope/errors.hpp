#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corefscope {

/// Precondition violated by the caller (unknown chain id, degenerate sample, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed external input. `line` is 1-based; 0 when no line applies.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        message_(what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }
  /// what() without the line prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace corefscope
