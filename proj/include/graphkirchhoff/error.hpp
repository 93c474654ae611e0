#pragma once

#include <stdexcept>
#include <string>

namespace graphkirchhoff {

// Malformed or unreadable input (bad JSON, missing fields, I/O failure).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  static constexpr int kExitCode = 1;
};

// Well-formed input that violates a model invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  static constexpr int kExitCode = 2;
};

// An iterative procedure (root bracketing, projection, descent) did not reach
// its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  static constexpr int kExitCode = 3;
};

}  // namespace graphkirchhoff
