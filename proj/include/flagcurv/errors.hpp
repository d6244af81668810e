#pragma once

#include <stdexcept>
#include <string>

namespace flagcurv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong dimensions, indices out of range, bad documents.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An invariant of a constructed object does not hold (e.g. phi not self-adjoint).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A flag cannot be formed: zero or linearly dependent vectors.
class FlagError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a function (e.g. F at y = 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A required structural property of the configuration fails.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or otherwise numerically unusable result.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace flagcurv
