#pragma once

#include <stdexcept>
#include <string>

namespace hitch {

// Invalid numeric input (negative distance, out-of-range angle, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An operation was called outside of its contract, e.g. the hitching-only
// planner with a charging vehicle.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Consumption decreases without bound along the vehicle ray (eligible for
// every direction and no deadline to stop the ride).
class UnboundedHitch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Instance too large for an exhaustive solver.
class SizeGuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario / input file could not be parsed or failed validation.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hitch
