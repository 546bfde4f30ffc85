#pragma once

#include <stdexcept>
#include <string>

namespace amcf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid size odd or below the minimum.
class InvalidGridError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (e.g. r <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Zero-mean part too large for the requested volume.
class VolumeLiftError : public Error {
 public:
  using Error::Error;
};

/// Lifted or evolved profile touched the positivity floor.
class PositivityError : public Error {
 public:
  using Error::Error;
};

/// Step size underflow, singular linear system, failed inner iteration.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Newton iteration ran out of iterations.
class NoConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Fit requested with too few usable samples.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Internal identity that should hold by construction did not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// No Kenmotsu parameter reproduces a given profile.
class MismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace amcf
