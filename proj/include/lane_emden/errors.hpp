#pragma once

#include <stdexcept>
#include <string>

namespace lane_emden {

/// Raised when inputs violate an operation's preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure (integration, root finding,
/// eigensolve) fails to produce a trustworthy result.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when reading or writing an output/config file fails.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lane_emden
