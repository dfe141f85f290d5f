#pragma once

#include <stdexcept>
#include <string>

namespace bdsource {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation (wavelength outside a
// material's validity window, angle out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Structurally invalid data: malformed files, broken matrix invariants,
// inconsistent record sets.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A well-posed solve has no solution (e.g. requested walk-off exceeds the
// crystal's maximum).
class NoSolutionError : public Error {
 public:
  using Error::Error;
};

// An iterative fit or optimization failed to make progress.
class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace bdsource
