#include "holonomy/scenario_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "holonomy/errors.hpp"
#include "holonomy/units.hpp"

#ifndef HOLONOMY_VERSION
#define HOLONOMY_VERSION "unknown"
#endif

namespace holonomy {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw ScenarioError("scenario file: " + what); }

double number(const json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing key '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) bad(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

std::string text_or(const json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) bad(std::string("'") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key)) bad("unknown key '" + key + "' in " + where);
}

DeviceParams parse_device(const json& j) {
  using units::from_ghz;
  using units::from_mhz;
  const double omega = from_ghz(number(j, "cavity_freq_ghz"));
  if (!j.contains("transmons") || !j.at("transmons").is_array() || j.at("transmons").size() != kNumTransmons)
    bad("'transmons' must be an array of exactly 3 objects");
  const json& arr = j.at("transmons");

  const bool direct = arr.at(0).is_object() && arr.at(0).contains("g0_mhz");
  std::array<DirectParams, kNumTransmons> dp{};
  std::array<FluxParams, kNumTransmons> fp{};
  for (std::size_t i = 0; i < kNumTransmons; ++i) {
    const json& t = arr.at(i);
    const std::string where = "transmons[" + std::to_string(i) + "]";
    if (!t.is_object()) bad(where + " must be an object");
    if (direct) {
      reject_unknown_keys(t, {"g0_mhz", "delta0_mhz"}, where);
      dp[i] = {from_mhz(number(t, "g0_mhz")), from_mhz(number(t, "delta0_mhz"))};
    } else {
      reject_unknown_keys(t, {"ec_mhz", "ejmax_ghz", "phi0", "k_mhz"}, where);
      fp[i].charging_energy = from_mhz(number(t, "ec_mhz"));
      fp[i].josephson_max = from_ghz(number(t, "ejmax_ghz"));
      fp[i].phi0 = number(t, "phi0");
      fp[i].k = from_mhz(number(t, "k_mhz"));
    }
  }
  return direct ? DeviceParams::direct(omega, dp) : DeviceParams::flux(omega, fp);
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  using units::from_mhz;
  if (!j.is_object()) bad("top level must be a JSON object");
  reject_unknown_keys(j,
                      {"label", "model", "cavity_freq_ghz", "transmons", "l_max_mhz", "omega_eff_mhz",
                       "gate_time_us", "drive_freq_mode", "hamiltonian_mode", "step_ps", "converge_tol",
                       "samples"},
                      "scenario");
  Scenario s;
  s.label = text_or(j, "label", "scenario");

  const std::string model = text_or(j, "model", "");
  if (model == "effective")
    s.model = Model::kEffective;
  else if (model == "exact")
    s.model = Model::kExact;
  else
    bad("'model' must be \"effective\" or \"exact\"");

  const std::string dfm = text_or(j, "drive_freq_mode", "exact");
  if (dfm == "exact")
    s.drive_freq_mode = DriveFrequencyMode::kExact;
  else if (dfm == "perturbative")
    s.drive_freq_mode = DriveFrequencyMode::kPerturbative;
  else
    bad("'drive_freq_mode' must be \"exact\" or \"perturbative\"");

  const std::string hm = text_or(j, "hamiltonian_mode", "first-order");
  if (hm == "first-order")
    s.hamiltonian_mode = HamiltonianMode::kFirstOrder;
  else if (hm == "flux-exact")
    s.hamiltonian_mode = HamiltonianMode::kFluxExact;
  else
    bad("'hamiltonian_mode' must be \"first-order\" or \"flux-exact\"");

  s.gate_time = units::from_us(number_or(j, "gate_time_us", 0.5));
  s.sim.step = units::from_ps(number_or(j, "step_ps", 0.0));
  s.sim.converge_tol = number_or(j, "converge_tol", 0.0);
  const double samples = number_or(j, "samples", 201.0);
  if (samples < 2.0 || samples != std::floor(samples)) bad("'samples' must be an integer >= 2");
  s.sim.samples = static_cast<std::size_t>(samples);

  if (s.model == Model::kEffective) {
    s.omega_eff = from_mhz(number(j, "omega_eff_mhz"));
  } else {
    s.device = parse_device(j);
    s.l_max = from_mhz(number(j, "l_max_mhz"));
    s.omega_eff = from_mhz(number_or(j, "omega_eff_mhz", 0.0));
  }
  validate(s);
  return s;
}

json scenario_to_json(const Scenario& s) {
  using units::to_ghz;
  using units::to_mhz;
  json j;
  j["label"] = s.label;
  j["model"] = std::string(to_string(s.model));
  j["gate_time_us"] = units::to_us(s.gate_time);
  j["drive_freq_mode"] = std::string(to_string(s.drive_freq_mode));
  j["hamiltonian_mode"] = std::string(to_string(s.hamiltonian_mode));
  j["step_ps"] = units::to_ps(s.sim.step);
  j["converge_tol"] = s.sim.converge_tol;
  j["samples"] = s.sim.samples;
  if (s.model == Model::kEffective || s.omega_eff > 0.0) j["omega_eff_mhz"] = to_mhz(s.omega_eff);
  if (s.device) {
    j["cavity_freq_ghz"] = to_ghz(s.device->omega_cavity());
    j["l_max_mhz"] = to_mhz(s.l_max);
    json arr = json::array();
    for (std::size_t i = 0; i < kNumTransmons; ++i) {
      const TransmonSpec& t = s.device->transmon(i);
      if (t.direct) {
        arr.push_back({{"g0_mhz", to_mhz(t.direct->g0)}, {"delta0_mhz", to_mhz(t.direct->delta0)}});
      } else {
        arr.push_back({{"ec_mhz", to_mhz(t.flux->charging_energy)},
                       {"ejmax_ghz", to_ghz(t.flux->josephson_max)},
                       {"phi0", t.flux->phi0},
                       {"k_mhz", to_mhz(t.flux->k)}});
      }
    }
    j["transmons"] = arr;
  }
  return j;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ScenarioError(path.string() + ": invalid JSON: " + e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const ScenarioError& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string trace_csv(const ScenarioRun& run) {
  std::string out = "t_us,p0,p1,p2,p3,fidelity\n";
  for (std::size_t k = 0; k < run.trace.times.size(); ++k) {
    out += format_number(units::to_us(run.trace.times[k]));
    for (double p : run.populations[k]) out += "," + format_number(p);
    out += "," + format_number(run.fidelity_trace[k]) + "\n";
  }
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "T_us,fidelity,leakage\n";
  for (const auto& r : result.records)
    out += format_number(units::to_us(r.gate_time)) + "," + format_number(r.fidelity) + "," +
           format_number(r.leakage) + "\n";
  return out;
}

std::string version_string() { return HOLONOMY_VERSION; }

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
}

json integrator_json(const Scenario& s, double step_used) {
  return {{"method", "exponential-midpoint"},
          {"step_ps", units::to_ps(step_used)},
          {"requested_step_ps", units::to_ps(s.sim.step)},
          {"converge_tol", s.sim.converge_tol},
          {"samples", s.sim.samples}};
}

}  // namespace

void write_outputs(const Scenario& s, const ScenarioRun& run, const std::filesystem::path& dir) {
  ensure_dir(dir);
  write_file(dir / "trace.csv", trace_csv(run));
  json m;
  m["kind"] = "run";
  m["version"] = version_string();
  m["scenario"] = scenario_to_json(s);
  m["integrator"] = integrator_json(s, run.step);
  m["results"] = {{"fidelity", run.fidelity},
                  {"holonomy_transfer", run.holonomy.transfer()},
                  {"leakage", run.holonomy.leakage},
                  {"omega_mhz", units::to_mhz(run.omega)},
                  {"norm_drift", run.trace.norm_drift}};
  m["wall_seconds"] = run.wall_seconds;
  write_file(dir / "manifest.json", m.dump(2) + "\n");
}

void write_outputs(const SweepResult& result, const std::filesystem::path& dir) {
  ensure_dir(dir);
  write_file(dir / "sweep.csv", sweep_csv(result));
  json m;
  m["kind"] = "sweep";
  m["version"] = version_string();
  m["scenario"] = scenario_to_json(result.scenario);
  m["integrator"] = integrator_json(result.scenario, result.scenario.sim.step);
  m["records"] = result.records.size();
  json failures = json::array();
  for (const auto& f : result.failures)
    failures.push_back({{"T_us", units::to_us(f.gate_time)}, {"error", f.message}});
  m["failures"] = failures;
  m["workers"] = result.workers;
  m["wall_seconds"] = result.wall_seconds;
  write_file(dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace holonomy
