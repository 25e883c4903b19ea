#pragma once

#include <stdexcept>
#include <string>

namespace regen {

/// Malformed or out-of-contract caller input.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric parameter outside the range where a formula is defined.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Rank-deficient linear system over a finite field.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZeroError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A code broke one of its own structural guarantees (not bad input).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Construction or verification would exceed the configured resource ceiling.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace regen
