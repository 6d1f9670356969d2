#pragma once

// Scenario presets, single runs and gate-time sweeps of the holonomic NOT
// gate, for either the ideal tripod model or the driven device model.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holonomy/device.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/propagator.hpp"
#include "holonomy/tripod.hpp"

namespace holonomy {

enum class Model { kEffective, kExact };
enum class DriveFrequencyMode { kExact, kPerturbative };

struct SimSettings {
  double step = 0.0;          // seconds; 0 picks default_step()
  double converge_tol = 0.0;  // 0 runs at a fixed step
  std::size_t samples = 201;  // trace rows for run_scenario
};

struct Scenario {
  std::string label;
  Model model = Model::kEffective;
  std::optional<DeviceParams> device;  // exact model only
  double omega_eff = 0.0;  // effective model: tripod Rabi norm; exact model: optional override
  double l_max = 0.0;      // exact model: cap on the longitudinal drive amplitude
  double gate_time = 0.5e-6;
  DriveFrequencyMode drive_freq_mode = DriveFrequencyMode::kExact;
  HamiltonianMode hamiltonian_mode = HamiltonianMode::kFirstOrder;
  SimSettings sim;
};

// Throws ScenarioError when the scenario cannot be run as described.
void validate(const Scenario& s);

// Rabi norm of the loop. Exact model: L_max * min_i |c_i| so that the largest
// drive amplitude over the loop equals the cap, unless omega_eff overrides it.
double loop_omega(const Scenario& s);

// Largest flux amplitude needed to reach L_max, flux-mode devices only.
std::optional<double> max_flux_amplitude(const Scenario& s);

// 1024 steps per period of the fastest frequency: max|omega_i| (exact model)
// or Omega (effective model), capped at T / 16.
double default_step(const Scenario& s);

// The driven device model behind an exact-model scenario.
struct DeviceDrive {
  DeviceParams device;
  DriveProgram program;
  DressedBasis basis;  // exact dressed states, v_1 initial, v_2 target
  double omega = 0.0;
};

// Thrown when some L_i(t) exceeds the configured cap.
class DriveLimitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

DeviceDrive build_device_drive(const Scenario& s);

struct ScenarioRun {
  PropagationTrace trace;                         // lab-frame states, bare basis
  std::vector<std::array<double, 4>> populations; // tripod / dressed basis, per sample
  std::vector<double> fidelity_trace;             // |<D_1(t)|psi(t)>|^2 in the rotating frame
  double fidelity = 0.0;                          // population of the target at T
  HolonomyMatrix holonomy;                        // in the tripod / dressed basis
  double omega = 0.0;
  double step = 0.0;
  double wall_seconds = 0.0;
};

ScenarioRun run_scenario(const Scenario& s);

struct GateResult {
  double fidelity = 0.0;
  double leakage = 0.0;
  double step = 0.0;
  double unitarity_defect = 0.0;  // max|U^dag U - 1|
};

// Propagator-only evaluation of the gate at s.gate_time.
GateResult evaluate_gate(const Scenario& s);

struct SweepRecord {
  double gate_time = 0.0;
  double fidelity = 0.0;
  double leakage = 0.0;
};

struct SweepFailure {
  double gate_time = 0.0;
  std::string message;
};

struct SweepResult {
  Scenario scenario;
  std::vector<SweepRecord> records;  // ascending gate time
  std::vector<SweepFailure> failures;
  std::size_t workers = 1;
  double wall_seconds = 0.0;
};

// 40 uniformly spaced gate times over [0.05, 1.0] us.
std::vector<double> default_sweep_grid();
std::vector<double> uniform_grid(double t_min, double t_max, std::size_t points);

// One evaluate_gate per time, spread over `workers` threads (0: hardware
// concurrency). Failures are recorded per time and do not stop the sweep.
SweepResult sweep_gate_time(const Scenario& s, std::vector<double> times, std::size_t workers = 0);

std::vector<Scenario> presets();
// Throws ScenarioError for an unknown name.
Scenario preset(std::string_view name);

std::string_view to_string(Model m);
std::string_view to_string(DriveFrequencyMode m);
std::string_view to_string(HamiltonianMode m);

}  // namespace holonomy
