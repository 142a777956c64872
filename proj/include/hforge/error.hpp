#pragma once

#include <stdexcept>
#include <string>

namespace hforge {

// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arguments of incompatible shape: ambient dimension, copy count, matrix
// dimensions, domain/codomain of maps.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Input data violates an invariant (overlapping rays, non-injective maps,
// failed Coxeter relations, malformed JSON, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An enumeration would exceed the configured size guard.
class SizeLimitExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace hforge
