#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace racsim {

// Invalid run configuration (bad JSON, unknown keys, inconsistent dimensions).
// The message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric procedure failed: quadrature did not settle, a finite-difference
// step underflowed, or an iteration cap was hit.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A monotone inversion could not bracket its target value.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The operation needs a capability this measure does not provide (a density,
// non-finite total mass, closed-form derivatives, ...).
class UnsupportedMeasureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact subset enumeration is infeasible at the requested dimension.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A batch stopped part-way; the first `completed()` rows of the output were
// finished before the failure.
class PartialResultError : public std::runtime_error {
 public:
  PartialResultError(const std::string& what, std::uint64_t completed)
      : std::runtime_error(what), completed_(completed) {}
  std::uint64_t completed() const noexcept { return completed_; }

 private:
  std::uint64_t completed_;
};

}  // namespace racsim
