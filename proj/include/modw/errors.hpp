#pragma once

#include <stdexcept>
#include <string>

namespace modw {

/// Invalid or inconsistent configuration (bad parameter, unknown key, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base class for failures of a numerical routine.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the domain where an operation is defined.
class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Grid or basis too coarse for the requested accuracy.
class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Time integration violated its conservation tolerance.
class IntegrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Lattice parameters do not produce the required physical regime.
class CalibrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Sampler acceptance rate out of range.
class TuningError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Pseudo-density reconstruction residual above threshold.
class IllPosedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace modw
