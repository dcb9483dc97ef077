#pragma once

#include <stdexcept>
#include <string>

namespace regnewt {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched vector lengths, weight vectors or operator shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the admissible domain (e.g. lambda outside [0, 1/2]).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operator norm too large for the filter recursions (‖A‖ > 1/√2).
class ScalingError : public Error {
 public:
  using Error::Error;
};

/// A dense materialization was required but the operator is matrix-free.
class UnsupportedOperatorError : public Error {
 public:
  using Error::Error;
};

/// Requested exponent exceeds the finite qualification of a filter family.
class QualificationError : public Error {
 public:
  using Error::Error;
};

/// Filter family and alpha schedule do not satisfy the ratio assumption together.
class ScheduleCompatibilityError : public Error {
 public:
  using Error::Error;
};

/// Problem or experiment set up inconsistently (missing solution, bad config values).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Degenerate problem, e.g. a vanishing derivative that cannot be rescaled.
class DegenerateProblemError : public Error {
 public:
  using Error::Error;
};

/// Parameter for which the forward PDE operator is singular or indefinite.
class IllPosedInstanceError : public Error {
 public:
  using Error::Error;
};

/// Sampling produced no usable pairs for an empirical constant.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace regnewt
