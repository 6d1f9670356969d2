#include "holonomy/device.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "holonomy/errors.hpp"
#include "holonomy/units.hpp"

namespace holonomy {

using units::kPi;

namespace {

void check_detuning(std::size_t i, double delta0) {
  if (delta0 == 0.0) {
    std::ostringstream msg;
    msg << "transmon " << i + 1 << ": zero detuning from the cavity";
    throw ScenarioError(msg.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Flux maps

double epsilon_of_flux(const FluxParams& t, double phi) {
  return std::sqrt(8.0 * t.charging_energy * t.josephson_max * std::abs(std::cos(kPi * phi)));
}

double g_of_flux(const FluxParams& t, double phi) {
  const double c = std::cos(kPi * phi);
  if (c < 0.0) {
    std::ostringstream msg;
    msg << "g_of_flux: cos(pi*phi) < 0 at phi = " << phi << " (outside the transmon operating range)";
    throw ContractError(msg.str());
  }
  return t.k * std::pow(c, 0.25);
}

double flux_amplitude_for_L(const FluxParams& t, double longitudinal) {
  const double tan_phi = std::tan(kPi * t.phi0);
  if (tan_phi == 0.0)
    throw ContractError("flux_amplitude_for_L: phi0 = 0 is a flat point, no longitudinal control");
  const double eps0 = epsilon_of_flux(t, t.phi0);
  return 2.0 * longitudinal / (eps0 * kPi * std::abs(tan_phi));
}

// ---------------------------------------------------------------------------
// DeviceParams

DeviceParams DeviceParams::direct(double omega_cavity,
                                  const std::array<DirectParams, kNumTransmons>& transmons) {
  DeviceParams d;
  d.mode_ = DeviceMode::kDirect;
  d.omega_cavity_ = omega_cavity;
  for (std::size_t i = 0; i < kNumTransmons; ++i) {
    const auto& p = transmons[i];
    check_detuning(i, p.delta0);
    if (!(std::abs(p.g0 / p.delta0) < kMaxCouplingRatio)) {
      std::ostringstream msg;
      msg << "transmon " << i + 1 << ": |g0/Delta0| = " << std::abs(p.g0 / p.delta0)
          << " is outside the perturbative regime (< " << kMaxCouplingRatio << ")";
      throw ScenarioError(msg.str());
    }
    d.transmons_[i].direct = p;
    d.g0_[i] = p.g0;
    d.delta0_[i] = p.delta0;
    d.eps0_[i] = omega_cavity + p.delta0;
    if (!(d.eps0_[i] > 0.0)) {
      std::ostringstream msg;
      msg << "transmon " << i + 1 << ": transmon frequency omega + Delta0 must be positive";
      throw ScenarioError(msg.str());
    }
  }
  return d;
}

DeviceParams DeviceParams::flux(double omega_cavity,
                                const std::array<FluxParams, kNumTransmons>& transmons) {
  DeviceParams d;
  d.mode_ = DeviceMode::kFlux;
  d.omega_cavity_ = omega_cavity;
  for (std::size_t i = 0; i < kNumTransmons; ++i) {
    const auto& p = transmons[i];
    const double c = std::cos(kPi * p.phi0);
    std::ostringstream msg;
    msg << "transmon " << i + 1 << ": ";
    if (!(std::abs(c) > 1e-12)) {
      msg << "phi0 = " << p.phi0 << " is at the zero-gap point";
      throw ScenarioError(msg.str());
    }
    if (c < 0.0) {
      msg << "phi0 = " << p.phi0 << " gives cos(pi*phi0) < 0";
      throw ScenarioError(msg.str());
    }
    if (!(p.charging_energy > 0.0 && p.josephson_max > 0.0)) {
      msg << "E_C and E_Jmax must be positive";
      throw ScenarioError(msg.str());
    }
    d.transmons_[i].flux = p;
    d.eps0_[i] = epsilon_of_flux(p, p.phi0);
    d.g0_[i] = g_of_flux(p, p.phi0);
    d.delta0_[i] = d.eps0_[i] - omega_cavity;
    check_detuning(i, d.delta0_[i]);
  }
  return d;
}

double DeviceParams::max_coupling_ratio() const {
  double m = 0.0;
  for (std::size_t i = 0; i < kNumTransmons; ++i) m = std::max(m, std::abs(g0_[i] / delta0_[i]));
  return m;
}

// ---------------------------------------------------------------------------
// DriveProgram

DriveProgram::DriveProgram(const DeviceParams& device, std::array<TransmonDrive, kNumTransmons> drives)
    : drives_(std::move(drives)), flux_mode_(device.mode() == DeviceMode::kFlux) {
  for (std::size_t i = 0; i < kNumTransmons; ++i) {
    if (!drives_[i].longitudinal || !drives_[i].phase)
      throw ContractError("DriveProgram: every transmon needs a phase and an envelope");
    transverse_ratio_[i] = device.coupling(i) / (2.0 * device.epsilon(i));
    if (flux_mode_) {
      const auto& f = *device.transmon(i).flux;
      const double tan_phi = std::tan(kPi * f.phi0);
      // d eps / d phi = -(eps/2) pi tan(pi phi)
      flux_per_l_[i] = tan_phi == 0.0 ? 0.0 : -2.0 / (device.epsilon(i) * kPi * tan_phi);
    }
  }
}

DriveProgram DriveProgram::idle(const DeviceParams& device,
                                const std::array<double, kNumTransmons>& frequencies) {
  std::array<TransmonDrive, kNumTransmons> drives;
  for (std::size_t i = 0; i < kNumTransmons; ++i) {
    drives[i].frequency = frequencies[i];
    drives[i].phase = [](double) { return 0.0; };
    drives[i].longitudinal = [](double) { return 0.0; };
  }
  return DriveProgram(device, std::move(drives));
}

double DriveProgram::transverse(std::size_t i, double t) const {
  return transverse_ratio_.at(i) * drives_[i].longitudinal(t);
}

double DriveProgram::flux_amplitude(std::size_t i, double t) const {
  if (!flux_mode_) throw ContractError("flux amplitude requested for a direct-mode device");
  if (flux_per_l_.at(i) == 0.0) throw ContractError("flux amplitude undefined at phi0 = 0");
  return flux_per_l_[i] * drives_[i].longitudinal(t);
}

double DriveProgram::carrier(std::size_t i, double t) const {
  return std::cos(drives_.at(i).frequency * t + drives_[i].phase(t));
}

// ---------------------------------------------------------------------------
// Hamiltonians

SquareOperator h0_matrix(const DeviceParams& d) {
  SquareOperator h(4);
  for (std::size_t i = 0; i < kNumTransmons; ++i) {
    h(0, i + 1) = d.coupling(i);
    h(i + 1, 0) = d.coupling(i);
    h(i + 1, i + 1) = d.detuning(i);
  }
  return h;
}

SquareOperator h_of_t(const DeviceParams& d, const DriveProgram& p, double t, HamiltonianMode mode) {
  SquareOperator h(4);
  if (mode == HamiltonianMode::kFirstOrder) {
    h = h0_matrix(d);
    for (std::size_t i = 0; i < kNumTransmons; ++i) {
      const double c = p.carrier(i, t);
      const double dg = p.transverse(i, t) * c;
      h(i + 1, i + 1) += p.longitudinal(i, t) * c;
      h(0, i + 1) += dg;
      h(i + 1, 0) += dg;
    }
    return h;
  }

  if (d.mode() != DeviceMode::kFlux)
    throw ContractError("flux-exact Hamiltonian requires a flux-mode device");
  for (std::size_t i = 0; i < kNumTransmons; ++i) {
    const auto& f = *d.transmon(i).flux;
    const double phi = f.phi0 + p.flux_amplitude(i, t) * p.carrier(i, t);
    const double g = g_of_flux(f, phi);
    h(0, i + 1) = g;
    h(i + 1, 0) = g;
    h(i + 1, i + 1) = epsilon_of_flux(f, phi) - d.omega_cavity();
  }
  return h;
}

// ---------------------------------------------------------------------------
// Dressed basis

namespace {

void require_perturbative(const DeviceParams& d) {
  const double ratio = d.max_coupling_ratio();
  if (!(ratio < kMaxCouplingRatio)) {
    std::ostringstream msg;
    msg << "dressed basis needs |g0/Delta0| < " << kMaxCouplingRatio << ", device has " << ratio;
    throw ScenarioError(msg.str());
  }
}

DressedBasis perturbative_basis(const DeviceParams& d) {
  DressedBasis b;
  StateVector v0(4);
  v0[0] = 1.0;
  double lambda0 = 0.0;
  for (std::size_t i = 0; i < kNumTransmons; ++i) {
    const double ratio = d.coupling(i) / d.detuning(i);
    v0[i + 1] = -ratio;
    StateVector vi(4);
    vi[0] = ratio;
    vi[i + 1] = 1.0;
    b.vectors[i + 1] = vi.normalized();
    b.energies[i + 1] = d.detuning(i) + d.coupling(i) * ratio;
    lambda0 -= d.coupling(i) * ratio;
  }
  b.vectors[0] = v0.normalized();
  b.energies[0] = lambda0;
  return b;
}

}  // namespace

DressedBasis dressed_basis(const DeviceParams& d, BasisMode mode) {
  require_perturbative(d);
  DressedBasis pert = perturbative_basis(d);
  if (mode == BasisMode::kPerturbative) return pert;

  const EigenSystem eig = hermitian_eig(h0_matrix(d));
  DressedBasis exact;
  std::array<bool, 4> taken{};
  for (std::size_t k = 0; k < 4; ++k) {
    double best = -1.0, second = -1.0;
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      const double ov = std::norm(inner(pert.vectors[k], eig.vector(j)));
      if (ov > best) {
        second = best;
        best = ov;
        best_j = j;
      } else if (ov > second) {
        second = ov;
      }
    }
    if (best - second < 1e-6 || taken[best_j]) {
      std::ostringstream msg;
      msg << "dressed basis: ambiguous match for v_" << k << " (overlaps " << best << " and "
          << second << "), near-degenerate levels";
      throw NumericalError(msg.str());
    }
    taken[best_j] = true;
    StateVector v = eig.vector(best_j);
    const Complex ov = inner(pert.vectors[k], v);
    v *= std::conj(ov) / std::abs(ov);
    exact.vectors[k] = v;
    exact.energies[k] = eig.eigenvalues[best_j];
  }
  return exact;
}

std::array<double, kNumTransmons> level_splittings(const DeviceParams& d, BasisMode mode) {
  std::array<double, kNumTransmons> e{};
  if (mode == BasisMode::kPerturbative) {
    // Delta_i + 2 g_i^2/Delta_i + sum_{j != i} g_j^2/Delta_j
    double sum = 0.0;
    for (std::size_t j = 0; j < kNumTransmons; ++j) sum += d.coupling(j) * d.coupling(j) / d.detuning(j);
    for (std::size_t i = 0; i < kNumTransmons; ++i)
      e[i] = d.detuning(i) + d.coupling(i) * d.coupling(i) / d.detuning(i) + sum;
    require_perturbative(d);
    return e;
  }
  const DressedBasis b = dressed_basis(d, BasisMode::kExact);
  for (std::size_t i = 0; i < kNumTransmons; ++i) e[i] = b.energies[i + 1] - b.energies[0];
  return e;
}

// ---------------------------------------------------------------------------
// Effective Rabi frequencies

double rabi_coefficient(const DeviceParams& d, std::size_t i) {
  const double g = d.coupling(i);
  return g / (4.0 * d.epsilon(i)) - g / (2.0 * d.detuning(i));
}

EffectiveRabi effective_rabi(const DeviceParams& d, std::size_t i, double longitudinal, double phase) {
  if (longitudinal < 0.0) throw ContractError("effective_rabi: L must be non-negative");
  const Complex rot = std::polar(1.0, phase);
  const double g = d.coupling(i);
  EffectiveRabi r;
  r.direct = longitudinal * g / (4.0 * d.epsilon(i)) * rot;
  r.indirect = -longitudinal * g / (2.0 * d.detuning(i)) * rot;
  r.total = r.direct + r.indirect;
  return r;
}

double invert_rabi(const DeviceParams& d, std::size_t i, double target) {
  if (target < 0.0) throw ContractError("invert_rabi: target magnitude must be non-negative");
  const double c = std::abs(rabi_coefficient(d, i));
  if (c == 0.0) {
    std::ostringstream msg;
    msg << "invert_rabi: transmon " << i + 1 << " has zero Rabi coefficient, drive cannot couple";
    throw ContractError(msg.str());
  }
  return target / c;
}

}  // namespace holonomy
