#include "holonomy/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "holonomy/errors.hpp"

namespace holonomy {

namespace {

void check_interval(double t0, double t1, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ContractError("propagate: step must be positive and finite");
  if (!(t1 > t0)) throw ContractError("propagate: need t1 > t0");
  if (h >= t1 - t0) {
    std::ostringstream msg;
    msg << "propagate: step " << h << " is not smaller than the interval " << (t1 - t0);
    throw ContractError(msg.str());
  }
}

// Number of full steps of size h before the final (possibly shorter) step.
std::size_t step_count(double t0, double t1, double h) {
  const double n = std::ceil((t1 - t0) / h * (1.0 - 1e-12));
  return static_cast<std::size_t>(std::max(1.0, n));
}

double step_start(double t0, double h, std::size_t n) { return t0 + static_cast<double>(n) * h; }

SquareOperator midpoint_step(const HamiltonianFn& hfun, double t, double dt) {
  const SquareOperator hm = hfun(t + 0.5 * dt);
  return expm_i_hermitian(hm, dt);
}

}  // namespace

PropagationTrace propagate(const HamiltonianFn& hfun, const StateVector& psi0, double t0, double t1,
                           double h, std::size_t samples) {
  check_interval(t0, t1, h);
  if (samples < 2) throw ContractError("propagate: need at least two samples (t0 and t1)");
  if (std::abs(psi0.norm_squared() - 1.0) > 1e-9)
    throw ContractError("propagate: initial state is not normalized");

  PropagationTrace trace;
  trace.step = h;
  trace.times.reserve(samples);
  trace.states.reserve(samples);

  std::vector<double> sample_times(samples);
  for (std::size_t k = 0; k < samples; ++k)
    sample_times[k] = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(samples - 1);
  sample_times.back() = t1;

  trace.times.push_back(t0);
  trace.states.push_back(psi0);
  std::size_t next_sample = 1;

  const std::size_t nsteps = step_count(t0, t1, h);
  StateVector psi = psi0;
  double drift = 0.0;
  for (std::size_t n = 0; n < nsteps; ++n) {
    const double ta = step_start(t0, h, n);
    const double tb = (n + 1 == nsteps) ? t1 : step_start(t0, h, n + 1);
    // samples strictly inside (ta, tb)
    while (next_sample + 1 < samples && sample_times[next_sample] < tb) {
      const double ts = sample_times[next_sample];
      StateVector branch = psi;
      if (ts > ta) branch = midpoint_step(hfun, ta, ts - ta) * psi;
      trace.times.push_back(ts);
      trace.states.push_back(branch);
      ++next_sample;
    }
    psi = midpoint_step(hfun, ta, tb - ta) * psi;
    drift = std::max(drift, std::abs(psi.norm_squared() - 1.0));
  }
  while (next_sample + 1 < samples) {
    // only reachable when round-off put a sample at t1
    trace.times.push_back(sample_times[next_sample]);
    trace.states.push_back(psi);
    ++next_sample;
  }
  trace.times.push_back(t1);
  trace.states.push_back(psi);
  trace.norm_drift = drift;
  return trace;
}

SquareOperator propagate_unitary(const HamiltonianFn& hfun, std::size_t dim, double t0, double t1, double h) {
  check_interval(t0, t1, h);
  const std::size_t nsteps = step_count(t0, t1, h);
  SquareOperator u = SquareOperator::identity(dim);
  for (std::size_t n = 0; n < nsteps; ++n) {
    const double ta = step_start(t0, h, n);
    const double tb = (n + 1 == nsteps) ? t1 : step_start(t0, h, n + 1);
    u = midpoint_step(hfun, ta, tb - ta) * u;
  }
  return u;
}

ConvergedTrace propagate_converged(const HamiltonianFn& hfun, const StateVector& psi0, double t0, double t1,
                                   double h_initial, double tol, std::size_t samples) {
  if (!(tol > 0.0)) throw ContractError("propagate_converged: tolerance must be positive");
  ConvergedTrace out;
  double h = h_initial;
  PropagationTrace coarse = propagate(hfun, psi0, t0, t1, h, samples);
  out.runs = 1;
  double last_fidelities[2] = {0.0, 0.0};
  for (int halving = 1; halving <= kMaxHalvings; ++halving) {
    h *= 0.5;
    PropagationTrace fine = propagate(hfun, psi0, t0, t1, h, samples);
    ++out.runs;
    const double f = fidelity(coarse.final_state(), fine.final_state());
    if (1.0 - f < tol) {
      out.trace = std::move(fine);
      out.step = h;
      out.infidelity = 1.0 - f;
      return out;
    }
    last_fidelities[0] = last_fidelities[1];
    last_fidelities[1] = f;
    coarse = std::move(fine);
  }
  std::ostringstream msg;
  msg.precision(12);
  msg << "propagate_converged: no convergence after " << kMaxHalvings
      << " halvings; last two refinement fidelities " << last_fidelities[0] << ", " << last_fidelities[1]
      << " (tolerance " << tol << ")";
  throw NumericalError(msg.str());
}

}  // namespace holonomy
