#pragma once

// Time-dependent Schroedinger propagation with the exponential midpoint rule
// (second-order Magnus):
//   psi(t + h) = exp(-i h H(t + h/2)) psi(t).
// Every step is an exact unitary, so the norm only drifts by round-off.

#include <cstddef>
#include <functional>
#include <vector>

#include "holonomy/linalg.hpp"

namespace holonomy {

using HamiltonianFn = std::function<SquareOperator(double)>;

struct PropagationTrace {
  std::vector<double> times;         // strictly increasing, first t0, last t1
  std::vector<StateVector> states;   // state at each sample time
  double step = 0.0;                 // integrator step h
  double norm_drift = 0.0;           // max |<psi|psi> - 1| over all steps

  const StateVector& final_state() const { return states.back(); }
};

// Propagates psi0 from t0 to t1 in steps of h (the last step shortened to end
// exactly on t1) and records `samples` states at uniformly spaced times
// including both endpoints. A sample that falls inside a step is obtained by a
// partial midpoint step off the main trajectory, so the sampling does not
// perturb the integration itself.
PropagationTrace propagate(const HamiltonianFn& hfun, const StateVector& psi0, double t0, double t1,
                           double h, std::size_t samples = 2);

// Full propagator U(t1, t0) on the same step grid as propagate().
SquareOperator propagate_unitary(const HamiltonianFn& hfun, std::size_t dim, double t0, double t1, double h);

struct ConvergedTrace {
  PropagationTrace trace;  // the finer of the last two runs
  double step = 0.0;       // step used for `trace`
  double infidelity = 0.0; // 1 - |<coarse|fine>|^2 of the final states
  int runs = 0;
};

inline constexpr int kMaxHalvings = 12;

// Halves h until successive final states agree to 1 - tol in fidelity.
// Throws NumericalError after kMaxHalvings halvings.
ConvergedTrace propagate_converged(const HamiltonianFn& hfun, const StateVector& psi0, double t0, double t1,
                                   double h_initial, double tol, std::size_t samples = 2);

}  // namespace holonomy
