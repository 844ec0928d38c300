#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "ghostsim/app/scenario.hpp"
#include "ghostsim/errors.hpp"

namespace {

std::pair<std::string, std::string> split_override(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos) throw ghostsim::ArgumentError("override '" + s + "' must be key=value");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

void report(const ghostsim::app::RunManifest& m) {
  std::cout << m.directory.string() << "\n";
  for (const auto& w : m.warnings) std::cerr << "warning: " << w << "\n";
  if (m.exit_code != 0) std::cerr << "error: " << m.error << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ghostsim::app;
  CLI::App app{"Ghost-image and phase-matching simulator for SPDC in uniaxial crystals"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  ScenarioSpec spec;
  std::string config;
  std::string out = "out";
  std::vector<std::string> sets;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", spec.name, "scenario name (see list-scenarios)")->required();
    cmd->add_option("--config", config, "configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--out", out, "output directory")->capture_default_str();
    cmd->add_option("--set", sets, "key=value override, repeatable");
    cmd->add_flag("--svg", spec.svg, "also write an SVG plot");
  };

  CLI::App* run = app.add_subcommand("run", "run one scenario");
  add_common(run);

  std::string param;
  std::vector<std::string> values;
  std::string unit;
  CLI::App* sw = app.add_subcommand("sweep", "run a scenario once per parameter value");
  sw->add_option("--param", param, "numeric configuration key")->required();
  sw->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
  sw->add_option("--unit", unit, "unit appended to values that carry none");
  add_common(sw);

  app.add_subcommand("list-scenarios", "print registered scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand("list-scenarios")) {
      for (const auto& s : list_scenarios()) std::cout << s.name << "\t" << s.description << "\n";
      return 0;
    }
    if (!config.empty()) spec.config = config;
    for (const auto& s : sets) spec.overrides.push_back(split_override(s));
    if (app.got_subcommand("run")) {
      const RunManifest m = run_scenario(spec, out);
      report(m);
      return m.exit_code;
    }
    std::vector<std::string> full;
    for (std::string v : values) {
      if (v.find_first_not_of(' ') == std::string::npos) continue;
      if (!unit.empty() && v.find_first_not_of("0123456789.+-eE ") == std::string::npos) v += " " + unit;
      full.push_back(v);
    }
    const RunManifest m = sweep(param, full, spec, out);
    report(m);
    return m.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}
