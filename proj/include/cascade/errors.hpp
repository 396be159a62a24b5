#pragma once

#include <stdexcept>
#include <string>

namespace cascade {

// Problem definition is invalid (bad config key, rejected coefficient, bad grammar).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numeric procedure failed to meet its contract (quadrature, truncation, overflow).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Expression text could not be parsed; offset is the byte position in the source.
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : ConfigError(msg + " (byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace cascade
