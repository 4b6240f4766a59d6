#pragma once

#include <stdexcept>
#include <string>

namespace kssim {

// Bad user input or parameters outside the supported range.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An operation was called on data that violates its contract
// (e.g. a density perturbation with nonzero mean).
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct PreconditionError : std::logic_error {
  using std::logic_error::logic_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fixed-point iteration failed to reach its tolerance.
struct DivergenceError : NumericalError {
  DivergenceError(const std::string& what, double last_residual)
      : NumericalError(what), residual(last_residual) {}
  double residual;
};

// A radial profile does not reach far enough for the planar box.
struct DomainCoverageError : ConfigError {
  using ConfigError::ConfigError;
};

// Time stepping produced non-finite or runaway values.
struct BlowUp : NumericalError {
  BlowUp(const std::string& what, double when) : NumericalError(what), time(when) {}
  double time;
};

}  // namespace kssim
