#pragma once

#include <stdexcept>
#include <string>

namespace orbicover {

/// Base of every error raised by the library. `kind()` is the short
/// machine-readable tag the CLI reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

/// Inputs outside an operation's domain (wrong group, mismatched parents,
/// unknown symbol, point outside the model, ...).
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain_error"; }
};

/// A documented precondition does not hold (invalid atlas, residual too
/// large, violated structure constraint).
class PreconditionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "precondition_error"; }
};

/// A hard size bound was hit, e.g. the coset table limit.
class ResourceError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "resource_error"; }
};

/// Floating point invariants drifted or a matrix became singular.
class NumericError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "numeric_error"; }
};

/// Unknown catalog entry.
class LookupError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "lookup_error"; }
};

}  // namespace orbicover
