#pragma once

#include <stdexcept>
#include <string>

namespace symmoments {

/// Argument outside an operation's domain (bad p, negative t, NaN input...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An engine cannot handle the input at all (enumeration cap, degenerate
/// partial fractions). Callers are expected to fall back to another engine.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegeneracyError : public CapacityError {
 public:
  using CapacityError::CapacityError;
};

/// Adaptive quadrature hit its subdivision cap before reaching tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace symmoments
