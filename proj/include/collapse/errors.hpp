#pragma once

#include <stdexcept>
#include <string>

namespace collapse {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A physical or numerical parameter is outside its admissible domain.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// Requested named parameter set does not exist.
class UnknownPreset : public Error {
 public:
  using Error::Error;
};

// Sampled kernel spectrum has a negative eigenvalue beyond round-off.
class NotPositiveSemidefinite : public Error {
 public:
  using Error::Error;
};

// Kernel lacks the curvature data needed for a second-derivative formula.
class KernelNotSmooth : public Error {
 public:
  using Error::Error;
};

// Array or matrix extents do not agree.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Objects built against different grids were combined.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

// State norm left the trust window during integration.  step_index is the
// 0-based step at which the blow-up was detected (-1 if not applicable).
class NumericalBlowup : public Error {
 public:
  NumericalBlowup(const std::string& what, long step_index = -1)
      : Error(what), step_index(step_index) {}
  long step_index;
};

// An experiment record was used with an operation for a different kind.
class WrongRecordKind : public Error {
 public:
  using Error::Error;
};

// A query point lies outside the tabulated grid.
class OutOfGridRange : public Error {
 public:
  using Error::Error;
};

// Malformed experiment-record document.  pointer is a JSON-pointer-ish
// location of the offending field.
class RecordSchemaError : public Error {
 public:
  RecordSchemaError(const std::string& what, std::string pointer)
      : Error(what + " at " + pointer), pointer(std::move(pointer)) {}
  std::string pointer;
};

}  // namespace collapse
