#pragma once

#include <stdexcept>
#include <string>

namespace omv {

// Operand shapes do not conform (length, row/column counts, ranges).
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A table or structure would exceed the configured memory guard.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input; carries the 1-based line number when known.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// An operation that violates a structure's update contract
// (duplicate insert, missing delete, insert into a decremental structure).
class contract_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A file could not be opened, read or written.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace omv
