#pragma once

#include <stdexcept>
#include <string>

namespace onc {

/// No coefficient vector was innovative for every targeted receiver within the
/// retry budget; the field is too small for the receiver count.
class SearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A run hit its max_slots guard before every receiver finished.
class HorizonExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PatternParseError : public std::runtime_error {
 public:
  PatternParseError(std::size_t line, const std::string& what)
      : std::runtime_error("pattern line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace onc
