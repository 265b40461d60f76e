#pragma once

#include <stdexcept>

namespace circlepat {

// Raised when a value leaves the admissible domain of a formula: a
// nonnegative u coordinate, a theta outside the interval for its delta, or
// an unsupported pattern type.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when an input is too large for an exhaustive procedure.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace circlepat
