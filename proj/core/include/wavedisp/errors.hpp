#pragma once

#include <stdexcept>
#include <string>

namespace wavedisp {

/// Base class for numerical failures (as opposed to bad arguments).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Requested phase velocity lies inside the essential spectrum, or a
/// reconstruction hit a depth where U(z) = c. Carries the offending depth.
class CriticalLayerError : public NumericalError {
public:
  CriticalLayerError(const std::string& msg, double z) : NumericalError(msg), z_(z) {}
  double depth() const { return z_; }

private:
  double z_;
};

/// The filtered spectrum contains no propagating-wave branch.
class NoPropagatingModeError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Continuation matrix became singular or a step underflowed; carries the
/// parameter value at which integration stopped.
class ContinuationBreakdownError : public NumericalError {
public:
  ContinuationBreakdownError(const std::string& msg, double t) : NumericalError(msg), t_(t) {}
  double parameter() const { return t_; }

private:
  double t_;
};

/// Step budget of the adaptive integrator exhausted.
class BudgetExceededError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Imported seed record does not match the target operator/profile.
class InvalidSeedError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Imported seed parses but its pencil residual is too large.
class StaleSeedError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Dense eigensolver backend failure.
class SolverError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

}  // namespace wavedisp
