#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "holonomy/errors.hpp"
#include "holonomy/experiments.hpp"
#include "holonomy/scenario_io.hpp"
#include "holonomy/units.hpp"

namespace holonomy {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("holonomy_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json fig3_json() {
  return json::parse(R"({
    "label": "fig3", "model": "exact", "cavity_freq_ghz": 5.0,
    "transmons": [{"g0_mhz": 60, "delta0_mhz": -300},
                  {"g0_mhz": -80, "delta0_mhz": -400},
                  {"g0_mhz": 100, "delta0_mhz": -500}],
    "l_max_mhz": 100, "drive_freq_mode": "exact", "hamiltonian_mode": "first-order",
    "step_ps": 0, "converge_tol": 0
  })");
}

TEST(ScenarioJson, ParsesExactModel) {
  const Scenario s = scenario_from_json(fig3_json());
  EXPECT_EQ(s.model, Model::kExact);
  ASSERT_TRUE(s.device.has_value());
  EXPECT_NEAR(units::to_mhz(s.device->coupling(1)), -80.0, 1e-9);
  EXPECT_NEAR(units::to_mhz(s.l_max), 100.0, 1e-9);
  EXPECT_DOUBLE_EQ(s.gate_time, 0.5e-6);
  EXPECT_NEAR(loop_omega(s), loop_omega(preset("fig3-exact")), 1e-6);
}

TEST(ScenarioJson, ParsesFluxTransmons) {
  json j = scenario_to_json(preset("feasibility-flux"));
  EXPECT_TRUE(j["transmons"][0].contains("ec_mhz"));
  // round trip fails only at validation, because of the regime guard
  EXPECT_THROW(scenario_from_json(j), ScenarioError);
}

TEST(ScenarioJson, RoundTripsEveryRunnablePreset) {
  for (const Scenario& p : presets()) {
    if (p.label == "feasibility-flux") continue;
    const Scenario back = scenario_from_json(scenario_to_json(p));
    EXPECT_EQ(back.label, p.label);
    EXPECT_EQ(back.model, p.model);
    EXPECT_NEAR(loop_omega(back), loop_omega(p), 1e-9 * loop_omega(p));
    // MHz <-> rad/s conversions may move the last bit
    EXPECT_NEAR(back.l_max, p.l_max, 1e-12 * p.l_max);
    EXPECT_DOUBLE_EQ(back.gate_time, p.gate_time);
    EXPECT_EQ(back.drive_freq_mode, p.drive_freq_mode);
    if (p.device) {
      for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(back.device->coupling(i), p.device->coupling(i), 1e-12 * std::abs(p.device->coupling(i)));
        EXPECT_NEAR(back.device->detuning(i), p.device->detuning(i), 1e-12 * std::abs(p.device->detuning(i)));
      }
    }
  }
}

TEST(ScenarioJson, RejectsBadInput) {
  json j = fig3_json();
  j["l_max"] = 100;
  EXPECT_THROW(scenario_from_json(j), ScenarioError);

  j = fig3_json();
  j["model"] = "adiabatic";
  EXPECT_THROW(scenario_from_json(j), ScenarioError);

  j = fig3_json();
  j["transmons"].erase(2);
  EXPECT_THROW(scenario_from_json(j), ScenarioError);

  j = fig3_json();
  j["transmons"][1]["g0_mhz"] = "big";
  EXPECT_THROW(scenario_from_json(j), ScenarioError);

  j = fig3_json();
  j.erase("l_max_mhz");
  EXPECT_THROW(scenario_from_json(j), ScenarioError);

  j = fig3_json();
  j["transmons"][0]["g0_mhz"] = 200;  // |g/Delta| > 0.5
  EXPECT_THROW(scenario_from_json(j), ScenarioError);

  j = fig3_json();
  j["hamiltonian_mode"] = "flux-exact";  // direct-mode device
  EXPECT_THROW(scenario_from_json(j), ScenarioError);

  EXPECT_THROW(scenario_from_json(json::parse(R"({"model": "effective"})")), ScenarioError);
  EXPECT_THROW(scenario_from_json(json::array()), ScenarioError);
}

TEST(ScenarioJson, LoadScenarioNamesThePath) {
  const fs::path dir = scratch_dir("load");
  fs::create_directories(dir);
  const fs::path bad = dir / "bad.json";
  std::ofstream(bad) << "{ not json";
  try {
    load_scenario(bad);
    FAIL() << "expected ScenarioError";
  } catch (const ScenarioError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.json"), std::string::npos);
  }
  EXPECT_THROW(load_scenario(dir / "missing.json"), ScenarioError);

  const fs::path good = dir / "good.json";
  std::ofstream(good) << fig3_json().dump();
  EXPECT_EQ(load_scenario(good).label, "fig3");
}

TEST(Csv, NumberFormat) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(1e-20), "1e-20");
}

TEST(Csv, TraceLayout) {
  Scenario s = preset("fig2-effective");
  s.sim.samples = 11;
  const std::string csv = trace_csv(run_scenario(s));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t_us,p0,p1,p2,p3,fidelity");
  int rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5);
    last = line;
    ++rows;
  }
  EXPECT_EQ(rows, 11);
  EXPECT_EQ(last.substr(0, 4), "0.5,");
  EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST(Outputs, RunWritesTraceAndManifest) {
  Scenario s = preset("fig2-effective");
  s.sim.samples = 5;
  const ScenarioRun run = run_scenario(s);
  const fs::path dir = scratch_dir("run") / "nested";
  write_outputs(s, run, dir);
  EXPECT_EQ(slurp(dir / "trace.csv"), trace_csv(run));
  const json m = json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(m["kind"], "run");
  EXPECT_EQ(m["scenario"], scenario_to_json(s));
  EXPECT_EQ(m["integrator"]["method"], "exponential-midpoint");
  EXPECT_NEAR(m["integrator"]["step_ps"].get<double>(), units::to_ps(run.step), 1e-9);
  EXPECT_NEAR(m["results"]["fidelity"].get<double>(), run.fidelity, 1e-15);
  EXPECT_TRUE(m.contains("version"));
  EXPECT_TRUE(m.contains("wall_seconds"));
}

TEST(Outputs, SweepWritesCsvAndManifestDeterministically) {
  Scenario s = preset("fig2-effective");
  s.sim.step = 1e-9;
  const std::vector<double> times{0.3e-6, 0.5e-6};
  const fs::path a = scratch_dir("sweep_a"), b = scratch_dir("sweep_b");
  write_outputs(sweep_gate_time(s, times, 1), a);
  write_outputs(sweep_gate_time(s, times, 2), b);
  EXPECT_EQ(slurp(a / "sweep.csv"), slurp(b / "sweep.csv"));
  EXPECT_EQ(slurp(a / "sweep.csv").substr(0, 22), "T_us,fidelity,leakage\n");
  const json m = json::parse(slurp(a / "manifest.json"));
  EXPECT_EQ(m["kind"], "sweep");
  EXPECT_EQ(m["records"], 2);
  EXPECT_TRUE(m["failures"].empty());
}

TEST(Outputs, UnwritableDirectoryNamesThePath) {
  const fs::path dir = scratch_dir("blocked");
  fs::create_directories(dir);
  const fs::path file = dir / "plain_file";
  std::ofstream(file) << "x";
  Scenario s = preset("fig2-effective");
  s.sim.samples = 2;
  try {
    write_outputs(s, run_scenario(s), file / "out");
    FAIL() << "expected an I/O error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("plain_file"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace holonomy
