#pragma once

#include <stdexcept>
#include <string>

namespace ccs {

/// Malformed or inconsistent input files and configuration.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical step could not be carried out (singular factorization,
/// ill-conditioned projection, unresolved integration window, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested energy lies outside the accessible window.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ccs
