#pragma once

#include <stdexcept>
#include <string>

namespace spt {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter outside the domain a model or operation accepts.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The Landau potential of the model is unbounded below.
class UnstableModel : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Iterative solver or local polish failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Requested problem exceeds the configured memory or size budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace spt
