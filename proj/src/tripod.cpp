#include "holonomy/tripod.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "holonomy/errors.hpp"
#include "holonomy/units.hpp"

namespace holonomy {

using units::kPi;

double RabiVector::norm() const {
  double s = 0.0;
  for (const auto& c : components) s += std::norm(c);
  return std::sqrt(s);
}

SquareOperator tripod_hamiltonian(const RabiVector& r) {
  SquareOperator h(4);
  for (std::size_t i = 0; i < 3; ++i) {
    h(0, i + 1) = r.components[i];
    h(i + 1, 0) = std::conj(r.components[i]);
  }
  return h;
}

RabiVector rabi_from_angles(double omega, double alpha, double beta, const std::array<double, 3>& phases) {
  if (omega < 0.0) throw ContractError("rabi_from_angles: Omega must be non-negative");
  RabiVector r;
  r.components[0] = std::polar(omega * std::sin(beta) * std::cos(alpha), phases[0]);
  r.components[1] = std::polar(omega * std::sin(beta) * std::sin(alpha), phases[1]);
  r.components[2] = std::polar(omega * std::cos(beta), phases[2]);
  return r;
}

std::pair<StateVector, StateVector> dark_states(double alpha, double beta) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double cb = std::cos(beta), sb = std::sin(beta);
  StateVector d1{0.0, cb * ca, cb * sa, -sb};
  StateVector d2{0.0, -sa, ca, 0.0};
  return {d1, d2};
}

double smooth_ramp(double s) {
  const double x = std::sin(0.5 * kPi * s);
  return x * x;
}

LoopSchedule::LoopSchedule(double gate_time_, double omega_) : gate_time(gate_time_), omega(omega_) {
  if (!(gate_time > 0.0)) throw ContractError("LoopSchedule: gate time must be positive");
  if (!(omega >= 0.0)) throw ContractError("LoopSchedule: Omega must be non-negative");
}

LoopAngles LoopSchedule::angles(double t) const {
  const double slack = 1e-12 * gate_time;
  if (t < -slack || t > gate_time + slack) {
    std::ostringstream msg;
    msg << "LoopSchedule: t = " << t << " outside [0, " << gate_time << "]";
    throw ContractError(msg.str());
  }
  const double s = std::clamp(3.0 * t / gate_time, 0.0, 3.0);
  constexpr double quarter = 0.5 * kPi;
  if (s <= 1.0) return {0.0, quarter * smooth_ramp(s)};
  if (s <= 2.0) return {quarter * smooth_ramp(s - 1.0), quarter};
  return {quarter, quarter * (1.0 - smooth_ramp(s - 2.0))};
}

RabiVector LoopSchedule::rabi(double t, const std::array<double, 3>& phases) const {
  const LoopAngles a = angles(t);
  return rabi_from_angles(omega, a.alpha, a.beta, phases);
}

HolonomyMatrix holonomy_from_propagator(const SquareOperator& u_total) {
  if (u_total.dim() != 4) throw ContractError("holonomy_from_propagator: expected a 4x4 propagator");
  const double defect = max_abs_diff(u_total.adjoint() * u_total, SquareOperator::identity(4));
  if (defect > 1e-9) {
    std::ostringstream msg;
    msg << "holonomy_from_propagator: propagator not unitary (max|U^dag U - 1| = " << defect << ")";
    throw ContractError(msg.str());
  }
  HolonomyMatrix h;
  SquareOperator block(2);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t l = 0; l < 2; ++l) {
      h.block[2 * k + l] = u_total(k + 1, l + 1);
      block(k, l) = u_total(k + 1, l + 1);
    }
  const EigenSystem gram = hermitian_eig(block.adjoint() * block);
  h.leakage = std::clamp(1.0 - gram.eigenvalues.front(), 0.0, 1.0);
  return h;
}

}  // namespace holonomy
