#pragma once

#include <stdexcept>
#include <string>

namespace condreg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (non-finite entries, κ < 1, shape mismatch).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a loss or smooth function.
class DomainError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Iterative routine failed: non-convergence, step underflow, no finite solution.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace condreg
