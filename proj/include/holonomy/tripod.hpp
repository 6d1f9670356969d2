#pragma once

// Ideal tripod model: hub state |0> coupled to |1>, |2>, |3>. The logical
// qubit is span{|1>, |2>} and the NOT gate is a closed loop in the (alpha, beta)
// angles of the Rabi vector.

#include <array>
#include <utility>

#include "holonomy/linalg.hpp"

namespace holonomy {

struct RabiVector {
  std::array<Complex, 3> components{};

  double norm() const;
};

SquareOperator tripod_hamiltonian(const RabiVector& r);

// (Omega sin(b) cos(a) e^{i p1}, Omega sin(b) sin(a) e^{i p2}, Omega cos(b) e^{i p3})
RabiVector rabi_from_angles(double omega, double alpha, double beta,
                            const std::array<double, 3>& phases = {0.0, 0.0, 0.0});

// Zero-energy eigenstates of tripod_hamiltonian(rabi_from_angles(...)) for
// real, equal phases.
std::pair<StateVector, StateVector> dark_states(double alpha, double beta);

struct LoopAngles {
  double alpha = 0.0;
  double beta = 0.0;
};

// Smooth step on [0, 1] with zero slope at both ends: sin^2(pi s / 2).
double smooth_ramp(double s);

// NOT-gate loop (0,0) -> (0,pi/2) -> (pi/2,pi/2) -> (pi/2,0), one angle moving
// per third of the gate time.
struct LoopSchedule {
  double gate_time = 0.0;  // seconds
  double omega = 0.0;      // Rabi norm, angular frequency, constant over the loop

  LoopSchedule(double gate_time, double omega);

  LoopAngles angles(double t) const;
  RabiVector rabi(double t, const std::array<double, 3>& phases = {0.0, 0.0, 0.0}) const;
};

struct HolonomyMatrix {
  // Row-major 2x2 block <k|U|l>, k, l in {1, 2}.
  std::array<Complex, 4> block{};
  // 1 - sigma_min^2 of the block: worst-case logical population lost.
  double leakage = 0.0;

  Complex operator()(std::size_t k, std::size_t l) const { return block[2 * k + l]; }
  // |<2|U|1>|^2, the NOT-gate transfer probability.
  double transfer() const { return std::norm((*this)(1, 0)); }
};

// Logical block of a closed-loop propagator written in the tripod basis.
HolonomyMatrix holonomy_from_propagator(const SquareOperator& u_total);

}  // namespace holonomy
