#pragma once

#include <stdexcept>
#include <string>

namespace crad {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A physical parameter violates its domain (non-positive magnitude, ...).
struct ParameterError : Error {
  using Error::Error;
};

/// Dimensioned quantity used with an incompatible scale.
struct UnitError : Error {
  using Error::Error;
};

/// An operation's stated precondition does not hold.
struct PreconditionError : Error {
  using Error::Error;
};

/// Adaptive integration failed to reach the requested tolerance.
/// Carries the best estimate and its error bound.
struct QuadratureError : Error {
  QuadratureError(const std::string& msg, double estimate_, double err_)
      : Error(msg), estimate(estimate_), err(err_) {}
  double estimate;
  double err;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace crad
