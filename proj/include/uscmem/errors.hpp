#pragma once

#include <stdexcept>
#include <string>

namespace uscmem {

/// Bad parameters or malformed input. The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical contract was broken at run time (norm drift, lost positivity,
/// ambiguous eigenstate tracking...). The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The Fock cutoff is too small for the requested state.
class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace uscmem
