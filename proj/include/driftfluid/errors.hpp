#pragma once

#include <stdexcept>
#include <string>

namespace driftfluid {

/// Inputs inconsistent with each other (sizes, grids, windows, keys).
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural invariant of a field or state does not hold.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the admissible domain (times, positivity, trajectory span).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Elliptic problem without solution (nonzero mean right-hand side).
class SolvabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values produced during time integration.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double t) : std::runtime_error(what), time_(t) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace driftfluid
