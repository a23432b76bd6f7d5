#pragma once

#include <stdexcept>
#include <string>

namespace noontomo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix or vector failed one of the state invariants (Hermitian, unit
/// trace, PSD, unit norm, unitary).
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// HOM visibility denominator C_dist + C vanishes.
class UndefinedVisibilityError : public Error {
 public:
  using Error::Error;
};

/// Wave-plate settings do not span the state space.
class IncompleteSettingsError : public Error {
 public:
  using Error::Error;
};

/// Malformed file, schema violation or bad parameter value.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace noontomo
