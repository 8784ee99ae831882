#pragma once

#include <stdexcept>
#include <string>

namespace nds {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an input matrix contains NaN/Inf or is otherwise unusable.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// Raised when matrix/vector dimensions do not line up for an operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Raised when a model fails structural validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Raised when a file cannot be parsed into a model.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Raised when the interconnection matrix I - A_zv*Phi is singular.
class IllPosedError : public Error {
 public:
  using Error::Error;
};

/// Raised when an operation's structural precondition does not hold
/// (e.g. the subsystem-wise Condition II test on a non-square stack).
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

/// Raised when a feedback gain cannot be applied (singular I - F*D_u).
class FeedbackError : public Error {
 public:
  using Error::Error;
};

/// Raised when the instance generator exhausts its rejection budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

}  // namespace nds
