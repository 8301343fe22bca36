#pragma once

#include <stdexcept>
#include <string>

namespace fraclog {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (z = 0 offset,
/// u = 0 projection, single-signed field in a sign-changing projection, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input: dimension mismatch, mismatched boxes, bad potential
/// parameters, unparsable configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, std::string key = {})
      : Error(what), key_(std::move(key)) {}

  /// Offending configuration key, empty when not tied to a key.
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Requested size does not fit (site count overflow, d = 0).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A certified tolerance could not be reached within configured limits.
class ToleranceError : public Error {
 public:
  ToleranceError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Non-finite intermediate value or a bracket that failed to close.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace fraclog
