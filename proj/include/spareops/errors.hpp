#pragma once

#include <stdexcept>
#include <string>

namespace spareops {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration value is missing, malformed or outside its domain.
/// `key()` names the offending field (dotted path for nested JSON keys).
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error(key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A linear system of the analysis has no unique solution. Raised when the
/// failure rate is too small for a reorder ever to be triggered.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double residual, long iterations)
      : Error(message), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  long iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  long iterations_;
};

/// Analytic and simulation inputs disagree.
class MismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace spareops
