#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "holonomy/errors.hpp"
#include "holonomy/experiments.hpp"
#include "holonomy/propagator.hpp"
#include "holonomy/tripod.hpp"
#include "holonomy/units.hpp"

namespace holonomy {
namespace {

using units::kTwoPi;

constexpr double kRabiHz = 10e6;

SquareOperator rabi_h() {
  SquareOperator h(4);
  h(0, 3) = h(3, 0) = kTwoPi * kRabiHz;
  return h;
}

// A smooth, genuinely time-dependent tripod loop.
HamiltonianFn loop_h(double t) {
  return [loop = LoopSchedule(t, kTwoPi * 10.5e6)](double s) { return tripod_hamiltonian(loop.rabi(s)); };
}

TEST(Propagate, StationaryStateOnlyPicksUpPhase) {
  const std::vector<double> diag{1e8, -2e8, 3e8, 0.5e8};
  const SquareOperator h = SquareOperator::diagonal(diag);
  const PropagationTrace tr = propagate([&](double) { return h; }, StateVector::basis(4, 2), 0.0, 1e-6, 1e-9, 11);
  for (const auto& s : tr.states) EXPECT_NEAR(std::norm(s[2]), 1.0, 1e-12);
  EXPECT_NEAR(std::arg(tr.final_state()[2] * std::polar(1.0, 3e8 * 1e-6)), 0.0, 1e-6);
}

TEST(Propagate, RabiOscillationOracle) {
  const SquareOperator h = rabi_h();
  const PropagationTrace tr =
      propagate([&](double) { return h; }, StateVector::basis(4, 0), 0.0, 1e-6, 1.0 / (200.0 * kRabiHz), 257);
  ASSERT_EQ(tr.times.size(), 257u);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const double expect = std::pow(std::sin(kTwoPi * kRabiHz * tr.times[k]), 2);
    EXPECT_NEAR(std::norm(tr.states[k][3]), expect, 1e-8);
  }
}

TEST(Propagate, SampleTimesIncludeEndpointsAndIncrease) {
  const PropagationTrace tr = propagate(loop_h(1e-7), StateVector::basis(4, 1), 0.0, 1e-7, 0.3e-9, 17);
  ASSERT_EQ(tr.times.size(), 17u);
  EXPECT_EQ(tr.times.front(), 0.0);
  EXPECT_EQ(tr.times.back(), 1e-7);
  for (std::size_t k = 1; k < tr.times.size(); ++k) EXPECT_GT(tr.times[k], tr.times[k - 1]);
  EXPECT_EQ(tr.step, 0.3e-9);
  EXPECT_LT(tr.norm_drift, 1e-9);
}

TEST(Propagate, SamplingDoesNotPerturbTheFinalState) {
  const HamiltonianFn h = loop_h(2e-7);
  const StateVector a = propagate(h, StateVector::basis(4, 1), 0.0, 2e-7, 0.7e-9, 2).final_state();
  const StateVector b = propagate(h, StateVector::basis(4, 1), 0.0, 2e-7, 0.7e-9, 333).final_state();
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(a[j] - b[j]), 0.0, 1e-13);
}

TEST(Propagate, TimeReversalReturnsToStart) {
  const double t1 = 3e-7;
  const HamiltonianFn h = loop_h(t1);
  const StateVector psi0 = StateVector::basis(4, 1);
  const PropagationTrace fwd = propagate(h, psi0, 0.0, t1, 0.25e-9);
  const PropagationTrace back =
      propagate([&](double s) { return -1.0 * h(t1 - s); }, fwd.final_state(), 0.0, t1, 0.25e-9);
  EXPECT_GT(fidelity(back.final_state(), psi0), 1.0 - 1e-8);
}

TEST(Propagate, ContractErrors) {
  const HamiltonianFn h = loop_h(1e-7);
  const StateVector psi0 = StateVector::basis(4, 1);
  EXPECT_THROW(propagate(h, psi0, 0.0, 1e-7, 0.0), ContractError);
  EXPECT_THROW(propagate(h, psi0, 0.0, 1e-7, -1e-9), ContractError);
  EXPECT_THROW(propagate(h, psi0, 0.0, 1e-7, 1e-7), ContractError);
  EXPECT_THROW(propagate(h, psi0, 0.0, 1e-7, 1e-9, 1), ContractError);
  EXPECT_THROW(propagate(h, 2.0 * psi0, 0.0, 1e-7, 1e-9), ContractError);
}

TEST(Propagate, PartialLastStepLandsOnEnd) {
  // 10.5 steps: the last step is half length; compare with an exact exponential
  const SquareOperator h = rabi_h();
  const double t1 = 10.5e-9;
  const PropagationTrace tr = propagate([&](double) { return h; }, StateVector::basis(4, 0), 0.0, t1, 1e-9);
  const StateVector exact = expm_i_hermitian(h, t1) * StateVector::basis(4, 0);
  EXPECT_GT(fidelity(tr.final_state(), exact), 1.0 - 1e-14);
}

TEST(Propagate, SecondOrderConvergence) {
  const double t1 = 0.2e-6;
  const HamiltonianFn h = loop_h(t1);
  const StateVector psi0 = StateVector::basis(4, 1);
  const double h0 = 4e-9;
  const StateVector ref = propagate(h, psi0, 0.0, t1, h0 / 32.0).final_state();
  std::vector<double> logh, logerr;
  for (double step : {h0, h0 / 2, h0 / 4, h0 / 8}) {
    const StateVector s = propagate(h, psi0, 0.0, t1, step).final_state();
    logh.push_back(std::log(step));
    logerr.push_back(std::log(std::sqrt((s - ref).norm_squared())));
  }
  // least-squares slope
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < logh.size(); ++k) mx += logh[k], my += logerr[k];
  mx /= logh.size();
  my /= logh.size();
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < logh.size(); ++k) {
    sxy += (logh[k] - mx) * (logerr[k] - my);
    sxx += (logh[k] - mx) * (logh[k] - mx);
  }
  EXPECT_NEAR(sxy / sxx, 2.0, 0.2);
}

TEST(Propagate, Deterministic) {
  const HamiltonianFn h = loop_h(1e-7);
  const PropagationTrace a = propagate(h, StateVector::basis(4, 1), 0.0, 1e-7, 0.37e-9, 9);
  const PropagationTrace b = propagate(h, StateVector::basis(4, 1), 0.0, 1e-7, 0.37e-9, 9);
  for (std::size_t k = 0; k < a.states.size(); ++k)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(a.states[k][j], b.states[k][j]);
}

TEST(PropagateUnitary, ColumnsMatchStatePropagation) {
  const HamiltonianFn h = loop_h(1e-7);
  const SquareOperator u = propagate_unitary(h, 4, 0.0, 1e-7, 0.4e-9);
  for (std::size_t c = 0; c < 4; ++c) {
    const StateVector s = propagate(h, StateVector::basis(4, c), 0.0, 1e-7, 0.4e-9).final_state();
    for (std::size_t r = 0; r < 4; ++r) EXPECT_NEAR(std::abs(u(r, c) - s[r]), 0.0, 1e-13);
  }
  EXPECT_LT(max_abs_diff(u.adjoint() * u, SquareOperator::identity(4)), 1e-12);
}

TEST(PropagateConverged, AlreadyConvergedStopsAfterTwoRuns) {
  const SquareOperator h = rabi_h();
  const ConvergedTrace c =
      propagate_converged([&](double) { return h; }, StateVector::basis(4, 0), 0.0, 1e-6, 1e-9, 1e-10);
  EXPECT_EQ(c.runs, 2);
  EXPECT_EQ(c.step, 0.5e-9);
  EXPECT_LT(c.infidelity, 1e-10);
}

TEST(PropagateConverged, RefinesAnAliasedDrive) {
  // Drive period equals the initial step, so every midpoint sees the same
  // field value and the coarse run misses the resonant dynamics entirely.
  const double f = 1e9, period = 1.0 / f;
  const HamiltonianFn h = [&](double t) {
    SquareOperator m(4);
    m(0, 1) = m(1, 0) = kTwoPi * 50e6 * std::cos(kTwoPi * f * t);
    m(1, 1) = kTwoPi * f;
    return m;
  };
  const StateVector psi0 = StateVector::basis(4, 0);
  const double t1 = 110 * period;  // resonant dynamics end at full transfer
  const StateVector ref = propagate(h, psi0, 0.0, t1, period / 512).final_state();
  EXPECT_LT(fidelity(propagate(h, psi0, 0.0, t1, period).final_state(), ref), 0.9);
  const ConvergedTrace c = propagate_converged(h, psi0, 0.0, t1, period, 1e-8);
  EXPECT_GT(c.runs, 3);
  EXPECT_LE(c.step, period / 8);
  EXPECT_GT(fidelity(c.trace.final_state(), ref), 1.0 - 1e-7);
}

TEST(PropagateConverged, ReportsNonConvergence) {
  // A ~14 THz drive stays unresolved through all halvings; the sampled field is
  // effectively random and successive refinements never agree.
  const HamiltonianFn h = [](double t) {
    SquareOperator m(4);
    m(0, 1) = m(1, 0) = kTwoPi * 500e6 * std::cos(kTwoPi * 1e13 * std::numbers::sqrt2 * t);
    return m;
  };
  try {
    propagate_converged(h, StateVector::basis(4, 1), 0.0, 1e-7, 25e-9, 1e-8);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("fidelit"), std::string::npos) << e.what();
  }
  EXPECT_THROW(propagate_converged(loop_h(1e-7), StateVector::basis(4, 1), 0.0, 1e-7, 1e-9, 0.0), ContractError);
}

TEST(PropagateConverged, Fig3ScenarioResolvesTheDrive) {
  Scenario s = preset("fig3-exact");
  s.gate_time = units::from_us(0.2);
  s.sim.step = kTwoPi / units::from_mhz(565.0) / 64.0;  // ~27 ps
  s.sim.converge_tol = 1e-8;
  s.sim.samples = 3;
  const ScenarioRun run = run_scenario(s);
  EXPECT_LE(run.step, 0.05e-9);
  EXPECT_LT(run.step, s.sim.step);
}

}  // namespace
}  // namespace holonomy
