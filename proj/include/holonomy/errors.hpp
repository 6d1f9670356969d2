#pragma once

#include <stdexcept>
#include <string>

namespace holonomy {

// Violated precondition on a library call (non-Hermitian generator,
// unnormalized state, mismatched dimensions, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Scenario or device description that cannot be simulated as given.
class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The numerics failed: no step-size convergence, drive above its cap,
// ambiguous dressed-state matching.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace holonomy
