#pragma once

#include <stdexcept>
#include <string>

namespace vop {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A family spec or an input document failed validation.
struct SpecError : Error {
  using Error::Error;
};

/// A parameter evaluation was requested without a value for `param`.
struct MissingParameter : Error {
  std::string param;
  explicit MissingParameter(std::string p)
      : Error("missing value for parameter '" + p + "'"), param(std::move(p)) {}
};

/// exp-series application hit a step that did not strictly lower the degree.
struct DegreeNotLowered : Error {
  using Error::Error;
};

/// An iteration passed its guard bound without terminating.
struct GuardExceeded : Error {
  using Error::Error;
};

/// A generator commutation relation failed while building a family.
struct RelationViolation : Error {
  using Error::Error;
};

/// The two independent constructions of the eigenoperator disagree.
struct SigmaMismatch : Error {
  using Error::Error;
};

/// A shift-operator action referenced a table index above the stored range.
struct TableOutOfRange : Error {
  using Error::Error;
};

/// d-orthogonality checks are undefined for bandwidth-zero (degenerate) tables.
struct BandwidthZero : Error {
  using Error::Error;
};

/// Cooperative cancellation was requested by the caller.
struct Cancelled : Error {
  using Error::Error;
};

}  // namespace vop
