#pragma once

// Three flux-tunable transmons coupled to one cavity, restricted to the
// one-excitation subspace. Basis order everywhere in this module:
//   0: |1ggg>  (photon in the cavity)
//   1: |0egg>, 2: |0geg>, 3: |0gge>  (transmon i excited)

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>

#include "holonomy/linalg.hpp"

namespace holonomy {

inline constexpr std::size_t kNumTransmons = 3;

// Flux-map constants. Energies are angular frequencies, phi0 is in flux quanta.
struct FluxParams {
  double charging_energy = 0.0;  // E_C
  double josephson_max = 0.0;    // E_Jmax
  double phi0 = 0.0;             // static flux bias
  double k = 0.0;                // coupling-map constant, sign allowed
};

// Static coupling and detuning given directly.
struct DirectParams {
  double g0 = 0.0;
  double delta0 = 0.0;
};

struct TransmonSpec {
  std::optional<FluxParams> flux;
  std::optional<DirectParams> direct;
};

enum class DeviceMode { kFlux, kDirect };

class DeviceParams {
 public:
  // Both factories validate their invariants and throw ScenarioError.
  static DeviceParams direct(double omega_cavity, const std::array<DirectParams, kNumTransmons>& transmons);
  static DeviceParams flux(double omega_cavity, const std::array<FluxParams, kNumTransmons>& transmons);

  DeviceMode mode() const { return mode_; }
  double omega_cavity() const { return omega_cavity_; }
  const TransmonSpec& transmon(std::size_t i) const { return transmons_.at(i); }

  // Static operating point of transmon i.
  double coupling(std::size_t i) const { return g0_.at(i); }     // g_i^(0)
  double detuning(std::size_t i) const { return delta0_.at(i); }  // Delta_i^(0)
  double epsilon(std::size_t i) const { return eps0_.at(i); }     // epsilon_i^(0)

  // Largest |g_i^(0) / Delta_i^(0)|.
  double max_coupling_ratio() const;

 private:
  DeviceParams() = default;

  DeviceMode mode_ = DeviceMode::kDirect;
  double omega_cavity_ = 0.0;
  std::array<TransmonSpec, kNumTransmons> transmons_{};
  std::array<double, kNumTransmons> g0_{};
  std::array<double, kNumTransmons> delta0_{};
  std::array<double, kNumTransmons> eps0_{};
};

// Perturbative regime bound on |g/Delta|.
inline constexpr double kMaxCouplingRatio = 0.5;

using Envelope = std::function<double(double)>;

struct TransmonDrive {
  double frequency = 0.0;  // omega_i, may be negative (signed level splitting)
  Envelope phase;          // phi_i(t), radians
  Envelope longitudinal;   // L_i(t), angular frequency
};

// Oscillatory flux drive on every transmon. The transverse amplitude T_i and
// flux amplitude F_i are derived from L_i through the first-order flux maps,
// so T_i / g_i^(0) = L_i / (2 epsilon_i^(0)) holds by construction.
// Envelopes must be pure functions of time.
class DriveProgram {
 public:
  DriveProgram(const DeviceParams& device, std::array<TransmonDrive, kNumTransmons> drives);

  // Drive that does nothing (L = 0, phase 0) at the given frequencies.
  static DriveProgram idle(const DeviceParams& device, const std::array<double, kNumTransmons>& frequencies);

  const TransmonDrive& drive(std::size_t i) const { return drives_.at(i); }

  double longitudinal(std::size_t i, double t) const { return drives_[i].longitudinal(t); }
  double transverse(std::size_t i, double t) const;
  // Signed flux amplitude producing +L_i cos(...) in the detuning; flux mode only.
  double flux_amplitude(std::size_t i, double t) const;
  // cos(omega_i t + phi_i(t))
  double carrier(std::size_t i, double t) const;

 private:
  std::array<TransmonDrive, kNumTransmons> drives_;
  std::array<double, kNumTransmons> transverse_ratio_{};  // g0 / (2 eps0)
  std::array<double, kNumTransmons> flux_per_l_{};        // d phi / d epsilon at phi0
  bool flux_mode_ = false;
};

enum class HamiltonianMode { kFirstOrder, kFluxExact };
enum class BasisMode { kPerturbative, kExact };

// Flux maps.
double epsilon_of_flux(const FluxParams& t, double phi);
double g_of_flux(const FluxParams& t, double phi);

// F = 2 L / (eps0 pi |tan(pi phi0)|), the flux amplitude whose first-order
// effect on epsilon has magnitude L.
double flux_amplitude_for_L(const FluxParams& t, double longitudinal);

SquareOperator h0_matrix(const DeviceParams& d);
SquareOperator h_of_t(const DeviceParams& d, const DriveProgram& p, double t, HamiltonianMode mode);

struct DressedBasis {
  std::array<StateVector, 4> vectors;  // v_0 .. v_3
  // Exact mode: eigenvalue matched to v_k. Perturbative mode: second-order
  // energies, lambda_0 = -sum_j g_j^2/Delta_j and lambda_i = Delta_i + g_i^2/Delta_i.
  std::array<double, 4> energies{};
};

DressedBasis dressed_basis(const DeviceParams& d, BasisMode mode);

// E_i = lambda_i - lambda_0 for i = 1..3 (returned in slots 0..2).
std::array<double, kNumTransmons> level_splittings(const DeviceParams& d, BasisMode mode);

struct EffectiveRabi {
  Complex total;
  Complex direct;    // from the transverse modulation T_i
  Complex indirect;  // from the longitudinal modulation L_i via dressing
};

// Coefficient c_i = g/(4 eps) - g/(2 Delta): Omega_i = L_i c_i e^{i phase}.
double rabi_coefficient(const DeviceParams& d, std::size_t i);

EffectiveRabi effective_rabi(const DeviceParams& d, std::size_t i, double longitudinal, double phase);

// L_i achieving |Omega_i| = target.
double invert_rabi(const DeviceParams& d, std::size_t i, double target);

}  // namespace holonomy
