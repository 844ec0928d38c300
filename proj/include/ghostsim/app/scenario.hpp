#pragma once

// Named figure-reproduction scenarios, parameter sweeps, and run manifests.

#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ghostsim/app/config.hpp"
#include "ghostsim/app/output.hpp"

namespace ghostsim::app {

inline constexpr const char* kToolVersion = "0.4.0";

struct ScenarioSpec {
  std::string name;
  std::vector<std::pair<std::string, std::string>> overrides;  ///< applied after the config file
  std::optional<std::filesystem::path> config;
  bool svg = false;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
};

struct MetricsRow {
  std::string artifact;
  ProfileAxis axis = ProfileAxis::Position;
  ProfileMetrics metrics;
};

struct RunManifest {
  std::string scenario;
  std::string version = kToolVersion;
  int exit_code = 0;
  std::string error;
  std::string config_snapshot;
  HeaderEntries resolved_config;
  std::vector<std::string> artifacts;  ///< paths relative to the run directory
  std::vector<MetricsRow> metrics;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, double>> timings;  ///< seconds
  std::filesystem::path directory;
};

/// Registered scenarios plus "custom".
std::vector<ScenarioInfo> list_scenarios();

/// Defaults, then the scenario preset, then the config file, then overrides.
/// Throws ArgumentError naming the registered scenarios for unknown names.
RunConfig scenario_config(const ScenarioSpec& spec);

/// Runs into out_dir/<name>/ and writes CSVs, metrics.csv, config.cfg, SVGs
/// on request, and manifest.json. Module errors are recorded in the manifest
/// (exit_code nonzero) rather than thrown; unknown scenario names throw.
RunManifest run_scenario(const ScenarioSpec& spec, const std::filesystem::path& out_dir);

/// Runs the scenario once per value of `param` (a numeric key; values carry
/// their unit, e.g. "3 mm") under out_dir/<name>_sweep/, continuing past
/// failures, and writes sweep_metrics.csv plus a sweep manifest.
RunManifest sweep(const std::string& param, const std::vector<std::string>& values, const ScenarioSpec& base,
                  const std::filesystem::path& out_dir);

/// 0 success, 1 configuration/domain error, 2 non-convergence or aliasing,
/// 3 I/O error.
int exit_code_for(const std::exception& e);

std::string manifest_json(const RunManifest& m);

}  // namespace ghostsim::app
