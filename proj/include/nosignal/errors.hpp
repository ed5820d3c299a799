#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nosignal {

/// Argument outside an operation's domain (non-finite angle, empty grid, bad geometry).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Amplitudes handed to the modulus-squared rule are not normalized.
class UnitarityError : public std::runtime_error {
 public:
  explicit UnitarityError(double deficit)
      : std::runtime_error("amplitudes not normalized: 1 - sum|a|^2 = " + std::to_string(deficit)),
        deficit_(deficit) {}

  double deficit() const noexcept { return deficit_; }

 private:
  double deficit_;
};

/// Operation is undefined for the requested Alice-side mode (e.g. beam stop has no Alice detectors).
class ModeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A sampled integrand or propagation kernel is under-resolved.
class SamplingError : public std::runtime_error {
 public:
  SamplingError(const std::string& what, std::size_t required_samples)
      : std::runtime_error(what + " (need at least " + std::to_string(required_samples) + " samples)"),
        required_(required_samples) {}

  std::size_t required_samples() const noexcept { return required_; }

 private:
  std::size_t required_;
};

class UnsupportedConfiguration : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class EmptyInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Config text could not be parsed. Carries the offending key and 1-based line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string key, int line, const std::string& why)
      : std::runtime_error("line " + std::to_string(line) + ": key '" + key + "': " + why),
        key_(std::move(key)),
        line_(line),
        reason_(why) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string key_;
  int line_;
  std::string reason_;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& cause)
      : std::runtime_error(path + ": " + cause), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace nosignal
