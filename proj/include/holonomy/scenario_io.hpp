#pragma once

// Scenario files (JSON, frequencies as f = omega/2pi in MHz/GHz) and the CSV +
// manifest outputs of runs and sweeps.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "holonomy/experiments.hpp"

namespace holonomy {

// Throws ScenarioError on missing keys, wrong types or invalid values.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::filesystem::path& path);

// "%.12g"
std::string format_number(double x);

std::string trace_csv(const ScenarioRun& run);
std::string sweep_csv(const SweepResult& result);

std::string version_string();

// trace.csv + manifest.json, resp. sweep.csv + manifest.json, in `dir`
// (created if missing). I/O failures throw std::runtime_error naming the path.
void write_outputs(const Scenario& s, const ScenarioRun& run, const std::filesystem::path& dir);
void write_outputs(const SweepResult& result, const std::filesystem::path& dir);

}  // namespace holonomy
