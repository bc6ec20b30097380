#pragma once

#include <stdexcept>
#include <string>

namespace coexist {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape or dimension mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An argument violates a documented precondition (range, sign, PSD, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Configuration is malformed or violates a constraint. `key()` names the
// offending dotted path, e.g. "model.n_humans".
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Numerical failure at run time (eigen-solver, integrator, Newton).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace coexist
