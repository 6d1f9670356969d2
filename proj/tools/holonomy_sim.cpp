// holonomy-sim: run, sweep and inspect holonomic NOT-gate scenarios.
//
// Exit codes: 0 success, 2 invalid scenario or arguments, 3 numerical failure,
// 1 anything else (I/O).

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "holonomy/errors.hpp"
#include "holonomy/experiments.hpp"
#include "holonomy/scenario_io.hpp"
#include "holonomy/units.hpp"

namespace {

using namespace holonomy;

constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

// A path, or "preset:NAME".
Scenario resolve_scenario(const std::string& arg) {
  constexpr std::string_view prefix = "preset:";
  if (arg.rfind(prefix, 0) == 0) {
    Scenario s = preset(arg.substr(prefix.size()));
    validate(s);
    return s;
  }
  return load_scenario(arg);
}

void print_presets() {
  for (const auto& s : presets()) {
    std::cout << s.label << "  model=" << to_string(s.model)
              << "  Omega/2pi=" << format_number(units::to_mhz(loop_omega(s))) << " MHz";
    if (auto f = max_flux_amplitude(s)) std::cout << "  max flux amplitude=" << format_number(*f);
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Holonomic single-qubit gates in a three-transmon / one-cavity device"};
  app.require_subcommand(1);

  std::string scenario_arg;
  std::string out_dir;
  double gate_time_us = -1.0;
  std::size_t samples = 0;

  auto* run = app.add_subcommand("run", "Propagate one gate and write trace.csv + manifest.json");
  run->add_option("scenario", scenario_arg, "Scenario JSON file or preset:NAME")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--gate-time-us", gate_time_us, "Gate time T in microseconds");
  run->add_option("--samples", samples, "Number of trace rows")->check(CLI::Range(2, 1000000));

  double t_min_us = 0.05, t_max_us = 1.0;
  std::size_t points = 40, workers = 0;
  auto* sweep = app.add_subcommand("sweep", "Fidelity vs gate time, written to sweep.csv + manifest.json");
  sweep->add_option("scenario", scenario_arg, "Scenario JSON file or preset:NAME")->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();
  sweep->add_option("--t-min-us", t_min_us, "Shortest gate time (us)");
  sweep->add_option("--t-max-us", t_max_us, "Longest gate time (us)");
  sweep->add_option("--points", points, "Number of gate times")->check(CLI::Range(1, 100000));
  sweep->add_option("--workers", workers, "Worker threads (0: all cores)");

  bool list = false;
  std::string dump;
  auto* pre = app.add_subcommand("presets", "List built-in scenarios or dump one as JSON");
  auto* list_opt = pre->add_flag("--list", list, "List preset names");
  pre->add_option("--dump", dump, "Print the named preset as a scenario file")->excludes(list_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*pre) {
      if (!dump.empty())
        std::cout << scenario_to_json(preset(dump)).dump(2) << "\n";
      else
        print_presets();
      return 0;
    }

    Scenario s = resolve_scenario(scenario_arg);
    if (*run) {
      if (gate_time_us > 0.0) s.gate_time = units::from_us(gate_time_us);
      if (samples > 0) s.sim.samples = samples;
      const ScenarioRun result = run_scenario(s);
      write_outputs(s, result, out_dir);
      std::cout << s.label << ": T = " << format_number(units::to_us(s.gate_time))
                << " us, fidelity = " << format_number(result.fidelity)
                << ", leakage = " << format_number(result.holonomy.leakage) << "\n";
      return 0;
    }

    if (!(t_max_us >= t_min_us) || !(t_min_us > 0.0)) throw ScenarioError("need 0 < t-min-us <= t-max-us");
    const auto times = uniform_grid(units::from_us(t_min_us), units::from_us(t_max_us), points);
    const SweepResult result = sweep_gate_time(s, times, workers);
    write_outputs(result, out_dir);
    std::cout << s.label << ": " << result.records.size() << " points, " << result.failures.size()
              << " failures\n";
    for (const auto& f : result.failures)
      std::cerr << "  T = " << format_number(units::to_us(f.gate_time)) << " us: " << f.message << "\n";
    return result.failures.empty() ? 0 : kExitNumerical;
  } catch (const ScenarioError& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ContractError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
