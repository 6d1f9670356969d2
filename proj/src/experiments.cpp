#include "holonomy/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "holonomy/errors.hpp"
#include "holonomy/units.hpp"

namespace holonomy {

using units::kPi;
using units::kTwoPi;

std::string_view to_string(Model m) { return m == Model::kEffective ? "effective" : "exact"; }

std::string_view to_string(DriveFrequencyMode m) {
  return m == DriveFrequencyMode::kExact ? "exact" : "perturbative";
}

std::string_view to_string(HamiltonianMode m) {
  return m == HamiltonianMode::kFirstOrder ? "first-order" : "flux-exact";
}

// ---------------------------------------------------------------------------
// Scenario checks and derived quantities

void validate(const Scenario& s) {
  auto fail = [&](const std::string& what) {
    throw ScenarioError("scenario '" + s.label + "': " + what);
  };
  if (!(s.gate_time > 0.0) || !std::isfinite(s.gate_time)) fail("gate time must be positive");
  if (s.sim.step < 0.0 || !std::isfinite(s.sim.step)) fail("step must be non-negative");
  if (s.sim.converge_tol < 0.0) fail("converge_tol must be non-negative");
  if (s.sim.samples < 2) fail("need at least 2 samples");
  if (s.sim.step > 0.0 && s.sim.step >= s.gate_time) fail("step must be shorter than the gate time");

  if (s.model == Model::kEffective) {
    if (!(s.omega_eff > 0.0)) fail("effective model needs omega_eff_mhz > 0");
    return;
  }
  if (!s.device) fail("exact model needs a device (cavity_freq_ghz and transmons)");
  if (!(s.l_max > 0.0)) fail("exact model needs l_max_mhz > 0");
  if (s.omega_eff < 0.0) fail("omega_eff_mhz must be non-negative");
  if (s.hamiltonian_mode == HamiltonianMode::kFluxExact && s.device->mode() != DeviceMode::kFlux)
    fail("flux-exact Hamiltonian needs flux-mode transmons (ec_mhz, ejmax_ghz, phi0, k_mhz)");
  if (!(s.device->max_coupling_ratio() < kMaxCouplingRatio)) {
    std::ostringstream msg;
    msg << "device outside the perturbative regime: max |g0/Delta0| = " << s.device->max_coupling_ratio()
        << " (need < " << kMaxCouplingRatio << ")";
    fail(msg.str());
  }
}

namespace {

double min_rabi_coefficient(const DeviceParams& d) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kNumTransmons; ++i) m = std::min(m, std::abs(rabi_coefficient(d, i)));
  return m;
}

BasisMode frequency_basis(DriveFrequencyMode m) {
  return m == DriveFrequencyMode::kExact ? BasisMode::kExact : BasisMode::kPerturbative;
}

}  // namespace

double loop_omega(const Scenario& s) {
  if (s.model == Model::kEffective || s.omega_eff > 0.0) return s.omega_eff;
  if (!s.device) throw ScenarioError("exact model without a device");
  return s.l_max * min_rabi_coefficient(*s.device);
}

std::optional<double> max_flux_amplitude(const Scenario& s) {
  if (s.model != Model::kExact || !s.device || s.device->mode() != DeviceMode::kFlux) return std::nullopt;
  double m = 0.0;
  for (std::size_t i = 0; i < kNumTransmons; ++i)
    m = std::max(m, flux_amplitude_for_L(*s.device->transmon(i).flux, s.l_max));
  return m;
}

double default_step(const Scenario& s) {
  // Measured: halving from here moves every preset's fidelity by < 3e-7.
  constexpr double kStepsPerPeriod = 1024.0;
  double h = 0.0;
  if (s.model == Model::kEffective) {
    h = kTwoPi / s.omega_eff / kStepsPerPeriod;
  } else {
    const auto freqs = level_splittings(*s.device, frequency_basis(s.drive_freq_mode));
    double w = 0.0;
    for (double f : freqs) w = std::max(w, std::abs(f));
    h = kTwoPi / w / kStepsPerPeriod;
  }
  return std::min(h, s.gate_time / 16.0);
}

// ---------------------------------------------------------------------------
// Device drive synthesis

DeviceDrive build_device_drive(const Scenario& s) {
  validate(s);
  if (s.model != Model::kExact) throw ContractError("build_device_drive: effective-model scenario");
  const DeviceParams& device = *s.device;
  const double omega = loop_omega(s);
  const LoopSchedule loop(s.gate_time, omega);
  const auto freqs = level_splittings(device, frequency_basis(s.drive_freq_mode));

  std::array<TransmonDrive, kNumTransmons> drives;
  for (std::size_t i = 0; i < kNumTransmons; ++i) {
    const double c = rabi_coefficient(device, i);
    if (c == 0.0) {
      std::ostringstream msg;
      msg << "transmon " << i + 1 << " cannot be driven (zero Rabi coefficient)";
      throw ScenarioError(msg.str());
    }
    // The loop asks for real, non-negative Omega_i; a negative coefficient is
    // compensated by shifting the drive phase by pi.
    const double phase = c < 0.0 ? kPi : 0.0;
    drives[i].frequency = freqs[i];
    drives[i].phase = [phase](double) { return phase; };
    drives[i].longitudinal = [loop, device, i](double t) {
      return invert_rabi(device, i, std::abs(loop.rabi(t).components[i]));
    };
  }
  DriveProgram program(device, drives);

  // Cap check on a dense grid that includes the segment boundaries.
  constexpr std::size_t kGrid = 3000;
  double worst_ratio = 0.0, worst_t = 0.0;
  std::size_t worst_i = 0;
  for (std::size_t k = 0; k <= kGrid; ++k) {
    const double t = s.gate_time * static_cast<double>(k) / kGrid;
    for (std::size_t i = 0; i < kNumTransmons; ++i) {
      const double ratio = program.longitudinal(i, t) / s.l_max;
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst_t = t;
        worst_i = i;
      }
    }
  }
  if (worst_ratio > 1.0 + 1e-9) {
    std::ostringstream msg;
    msg << "drive amplitude L_" << worst_i + 1 << " = " << units::to_mhz(worst_ratio * s.l_max)
        << " MHz at t = " << units::to_us(worst_t) << " us exceeds the cap of " << units::to_mhz(s.l_max)
        << " MHz";
    throw DriveLimitError(msg.str());
  }

  if (device.mode() == DeviceMode::kFlux) {
    const double f = max_flux_amplitude(s).value_or(0.0);
    if (f > 1e-2)
      std::clog << "warning: flux amplitude " << f << " is not small compared with the flux quantum\n";
  }

  DeviceDrive out{device, std::move(program), dressed_basis(device, BasisMode::kExact), omega};
  return out;
}

// ---------------------------------------------------------------------------
// Runs

namespace {

struct Model4 {
  HamiltonianFn hfun;
  SquareOperator to_model_basis;     // columns: tripod / dressed basis vectors
  std::array<double, 4> frame_freq;  // rotating-frame frequencies per basis state
  double omega = 0.0;
  LoopSchedule loop;
};

Model4 build_model(const Scenario& s) {
  validate(s);
  if (s.model == Model::kEffective) {
    const LoopSchedule loop(s.gate_time, s.omega_eff);
    return Model4{[loop](double t) { return tripod_hamiltonian(loop.rabi(t)); },
                  SquareOperator::identity(4), {0.0, 0.0, 0.0, 0.0}, s.omega_eff, loop};
  }
  auto drive = std::make_shared<DeviceDrive>(build_device_drive(s));
  const HamiltonianMode mode = s.hamiltonian_mode;
  std::array<double, 4> freq{0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < kNumTransmons; ++i) freq[i + 1] = drive->program.drive(i).frequency;
  SquareOperator basis = SquareOperator::from_columns(drive->basis.vectors);
  const double omega = drive->omega;
  return Model4{[drive, mode](double t) { return h_of_t(drive->device, drive->program, t, mode); },
                basis, freq, omega, LoopSchedule(s.gate_time, omega)};
}

double resolve_step(const Scenario& s) { return s.sim.step > 0.0 ? s.sim.step : default_step(s); }

SquareOperator in_model_basis(const Model4& m, const SquareOperator& u) {
  return m.to_model_basis.adjoint() * u * m.to_model_basis;
}

double converged_step(const Model4& m, const Scenario& s, const StateVector& psi0) {
  const double h = resolve_step(s);
  if (s.sim.converge_tol <= 0.0) return h;
  return propagate_converged(m.hfun, psi0, 0.0, s.gate_time, h, s.sim.converge_tol).step;
}

}  // namespace

ScenarioRun run_scenario(const Scenario& s) {
  const auto start = std::chrono::steady_clock::now();
  const Model4 m = build_model(s);
  const StateVector psi0 = m.to_model_basis.column(1);
  ScenarioRun run;
  run.omega = m.omega;

  const double h = resolve_step(s);
  if (s.sim.converge_tol > 0.0) {
    auto conv = propagate_converged(m.hfun, psi0, 0.0, s.gate_time, h, s.sim.converge_tol, s.sim.samples);
    run.trace = std::move(conv.trace);
    run.step = conv.step;
  } else {
    run.trace = propagate(m.hfun, psi0, 0.0, s.gate_time, h, s.sim.samples);
    run.step = h;
  }

  const SquareOperator basis_adj = m.to_model_basis.adjoint();
  for (std::size_t k = 0; k < run.trace.times.size(); ++k) {
    const double t = run.trace.times[k];
    StateVector c = basis_adj * run.trace.states[k];
    std::array<double, 4> p{};
    for (std::size_t j = 0; j < 4; ++j) {
      p[j] = std::norm(c[j]);
      c[j] *= std::polar(1.0, m.frame_freq[j] * t);
    }
    run.populations.push_back(p);
    const LoopAngles a = m.loop.angles(t);
    run.fidelity_trace.push_back(fidelity(dark_states(a.alpha, a.beta).first, c));
  }
  run.fidelity = run.populations.back()[2];

  const SquareOperator u = propagate_unitary(m.hfun, 4, 0.0, s.gate_time, run.step);
  run.holonomy = holonomy_from_propagator(in_model_basis(m, u));
  run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

GateResult evaluate_gate(const Scenario& s) {
  const Model4 m = build_model(s);
  GateResult r;
  r.step = converged_step(m, s, m.to_model_basis.column(1));
  const SquareOperator u = in_model_basis(m, propagate_unitary(m.hfun, 4, 0.0, s.gate_time, r.step));
  r.unitarity_defect = max_abs_diff(u.adjoint() * u, SquareOperator::identity(4));
  const HolonomyMatrix hol = holonomy_from_propagator(u);
  r.fidelity = hol.transfer();
  r.leakage = hol.leakage;
  return r;
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<double> uniform_grid(double t_min, double t_max, std::size_t points) {
  if (points == 0) return {};
  if (points == 1) return {t_min};
  std::vector<double> out(points);
  for (std::size_t k = 0; k < points; ++k)
    out[k] = t_min + (t_max - t_min) * static_cast<double>(k) / static_cast<double>(points - 1);
  return out;
}

std::vector<double> default_sweep_grid() { return uniform_grid(units::from_us(0.05), units::from_us(1.0), 40); }

SweepResult sweep_gate_time(const Scenario& s, std::vector<double> times, std::size_t workers) {
  if (times.empty()) throw ScenarioError("sweep: no gate times given");
  for (double t : times)
    if (!(t > 0.0) || !std::isfinite(t)) throw ScenarioError("sweep: gate times must be positive");
  std::sort(times.begin(), times.end());

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, times.size());

  const auto start = std::chrono::steady_clock::now();
  std::vector<std::optional<GateResult>> results(times.size());
  std::vector<std::string> errors(times.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t k = next++; k < times.size(); k = next++) {
      Scenario point = s;
      point.gate_time = times[k];
      try {
        results[k] = evaluate_gate(point);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  SweepResult out;
  out.scenario = s;
  out.workers = workers;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (results[k])
      out.records.push_back({times[k], std::clamp(results[k]->fidelity, 0.0, 1.0), results[k]->leakage});
    else
      out.failures.push_back({times[k], errors[k]});
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

// ---------------------------------------------------------------------------
// Presets

namespace {

using units::from_ghz;
using units::from_mhz;

constexpr std::array<double, 3> kFig3Coupling{60.0, -80.0, 100.0};   // MHz
constexpr std::array<double, 3> kFig3Detuning{-300.0, -400.0, -500.0};  // MHz

Scenario direct_preset(std::string label, double coupling_scale, double detuning_scale, double l_max_mhz) {
  std::array<DirectParams, kNumTransmons> t{};
  for (std::size_t i = 0; i < kNumTransmons; ++i)
    t[i] = {from_mhz(kFig3Coupling[i] * coupling_scale), from_mhz(kFig3Detuning[i] * detuning_scale)};
  Scenario s;
  s.label = std::move(label);
  s.model = Model::kExact;
  s.device = DeviceParams::direct(from_ghz(5.0), t);
  s.l_max = from_mhz(l_max_mhz);
  return s;
}

Scenario feasibility_preset() {
  constexpr std::array<double, 3> phi0{0.48426, 0.48489, 0.48550};
  std::array<FluxParams, kNumTransmons> t{};
  for (std::size_t i = 0; i < kNumTransmons; ++i) {
    t[i].charging_energy = from_mhz(280.0);
    t[i].josephson_max = from_ghz(224.0);
    t[i].phi0 = phi0[i];
    // k chosen so that g(phi0) reproduces the fig3-exact couplings
    t[i].k = from_mhz(kFig3Coupling[i]) / std::pow(std::cos(kPi * phi0[i]), 0.25);
  }
  Scenario s;
  s.label = "feasibility-flux";
  s.model = Model::kExact;
  s.device = DeviceParams::flux(from_ghz(5.0), t);
  s.l_max = from_mhz(100.0);
  return s;
}

}  // namespace

std::vector<Scenario> presets() {
  std::vector<Scenario> out;
  Scenario fig2;
  fig2.label = "fig2-effective";
  fig2.model = Model::kEffective;
  fig2.omega_eff = from_mhz(10.5);
  out.push_back(fig2);
  out.push_back(direct_preset("fig3-exact", 1.0, 1.0, 100.0));
  out.push_back(direct_preset("fig4a", 1.0, 0.5, 100.0));
  out.push_back(direct_preset("fig4b", 2.0, 1.0, 100.0));
  out.push_back(direct_preset("fig4c", 1.0, 1.0, 200.0));
  out.push_back(direct_preset("fig4d", 2.0, 2.0, 200.0));
  out.push_back(feasibility_preset());
  return out;
}

Scenario preset(std::string_view name) {
  for (auto& s : presets())
    if (s.label == name) return s;
  throw ScenarioError("unknown preset '" + std::string(name) + "'");
}

}  // namespace holonomy
