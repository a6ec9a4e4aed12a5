#pragma once

#include <stdexcept>
#include <string>

namespace supnys {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition.
class invalid_argument : public error {
 public:
  using error::error;
};

/// Malformed input file.
class parse_error : public error {
 public:
  parse_error(const std::string &what, std::size_t line)
      : error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace supnys
