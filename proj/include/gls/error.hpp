#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gls {

// Invalid parameters or an impossible run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numeric argument outside the domain of a formula (r > 1, p <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed input data. `line` is 1-based; 0 means "not tied to a line".
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Training diverged (non-finite loss or weights).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gls
