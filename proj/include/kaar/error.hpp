#pragma once

#include <stdexcept>
#include <string>

namespace kaar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside its domain (ridge <= 0, degree < 1, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A factorization failed, or a Schur complement fell to the numeric
/// floor. Either the kernel is not positive semidefinite or the problem is
/// too badly conditioned to continue.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

/// An outcome exceeds the declared bound Y, so the loss bound does not apply.
class BoundViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace kaar
