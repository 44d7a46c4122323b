#pragma once

#include <stdexcept>
#include <string>

namespace dal {

/// Invalid argument: dimension mismatch, negative threshold, non-positive eta.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A dual point violates the l-infinity constraint beyond tolerance.
class FeasibilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Non-finite values or a factorization/decomposition failure.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Backtracking shrank the step below the underflow floor.
class LineSearchError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Corrupt or unreadable problem file, or an I/O failure.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dal
