#include "ghostsim/app/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "ghostsim/errors.hpp"

namespace ghostsim::app {
namespace {

using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

struct Preset {
  std::string description;
  std::string config;  // applied on top of the defaults
  std::string kind;
};

const std::map<std::string, Preset>& presets() {
  static const std::map<std::string, Preset> p{
      {"fig3b", {"slit image and PSF at d2 = 750 mm (NA 0.002)", "d2 = 750 mm\nx_min = -1 mm\nx_max = 1 mm\n", "slit"}},
      {"fig6a", {"slit image and PSF at d2 = 50 mm (NA 0.03)", "d2 = 50 mm\n", "slit"}},
      {"fig10", {"degenerate-pair image and PSF, 160 um slit, d2 = 50 mm", "d2 = 50 mm\n", "degenerate"}},
      {"fig14a", {"single-frequency, slow and fast PSFs, L = 1 mm", "length = 1 mm\n", "detectors"}},
      {"fig14b", {"single-frequency, slow and fast PSFs, L = 3 mm", "length = 3 mm\n", "detectors"}},
      {"fig14c", {"single-frequency, slow and fast PSFs, L = 6 mm", "length = 6 mm\n", "detectors"}},
      {"fig15a", {"phase-matching curves at the band edges and center, L = 1 mm", "length = 1 mm\n", "curves"}},
      {"fig15b", {"phase-matching curves at the band edges and center, L = 3 mm", "length = 3 mm\n", "curves"}},
      {"fig15c", {"phase-matching curves at the band edges and center, L = 6 mm", "length = 6 mm\n", "curves"}},
      {"farfield", {"band-weighted far-field map and degenerate slice", "", "farfield"}},
  };
  return p;
}

std::string registered_names() {
  std::string s;
  for (const auto& [name, _] : presets()) s += name + ", ";
  return s + "custom";
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct Artifact {
  std::string name;
  Profile profile;
};

class Runner {
 public:
  Runner(const RunConfig& cfg, std::string scenario) : cfg_(cfg), scenario_(std::move(scenario)) {
    header_.emplace_back("tool_version", kToolVersion);
    header_.emplace_back("scenario", scenario_);
    for (const auto& e : config_entries(cfg_)) header_.push_back(e);
    header_.emplace_back("resolved.cut_angle", g17(cfg_.phasematch.crystal.cut_angle) + " rad");
  }

  std::vector<Artifact> compute(std::vector<std::pair<std::string, double>>& timings, std::vector<AngleMap>& maps);

 private:
  template <class F>
  auto timed(std::vector<std::pair<std::string, double>>& timings, const std::string& name, F&& f) {
    const auto t0 = Clock::now();
    auto r = f();
    timings.emplace_back(name, std::chrono::duration<double>(Clock::now() - t0).count());
    return r;
  }

  Profile point_psf() const {
    ImagingGeometry g = cfg_.geometry;
    g.slit_width = 0.0;
    if (cfg_.imaging.route == ImagingRoute::Direct) return psf_single_frequency(g, cfg_.phasematch, cfg_.signal, x(), cfg_.imaging);
    if (small_parameter(g, cfg_.signal) < 0.01) return psf_factored(g, cfg_.phasematch, cfg_.signal, x(), cfg_.imaging);
    return ccr_image(g, cfg_.phasematch, cfg_.signal, x(), cfg_.imaging);
  }

  Eigen::ArrayXd x() const { return cfg_.x_grid.nodes(); }

 public:
  const RunConfig& cfg_;
  std::string scenario_;
  HeaderEntries header_;
};

std::vector<Artifact> Runner::compute(std::vector<std::pair<std::string, double>>& timings,
                                      std::vector<AngleMap>& maps) {
  const auto it = presets().find(scenario_);
  const std::string kind = it == presets().end() ? "custom" : it->second.kind;
  const PhaseMatchConfig& pm = cfg_.phasematch;
  std::vector<Artifact> out;
  if (kind == "slit") {
    out.push_back({"image_phasematched", timed(timings, "image_phasematched", [&] {
                     return ccr_fully_phasematched(cfg_.geometry, cfg_.signal, x(), cfg_.imaging);
                   })});
    out.push_back({"image", timed(timings, "image", [&] { return ccr_image(cfg_.geometry, pm, cfg_.signal, x(), cfg_.imaging); })});
    out.push_back({"psf", timed(timings, "psf", [&] { return point_psf(); })});
  } else if (kind == "degenerate" || kind == "custom") {
    out.push_back({"image", timed(timings, "image", [&] { return ccr_image(cfg_.geometry, pm, cfg_.signal, x(), cfg_.imaging); })});
    out.push_back({"psf", timed(timings, "psf", [&] { return point_psf(); })});
    if (kind == "custom") {
      out.push_back({"psf_band", timed(timings, "psf_band", [&] {
                       return psf_polychromatic(cfg_.geometry, pm, cfg_.band, cfg_.detector, x(), cfg_.imaging);
                     })});
    }
  } else if (kind == "detectors") {
    out.push_back({"psf_single", timed(timings, "psf_single", [&] { return point_psf(); })});
    DetectorPair pair = timed(timings, "psf_band", [&] {
      return psf_polychromatic_pair(cfg_.geometry, pm, cfg_.band, x(), cfg_.imaging);
    });
    out.push_back({"psf_slow", std::move(pair.slow)});
    out.push_back({"psf_fast", std::move(pair.fast)});
  } else if (kind == "curves") {
    const Eigen::ArrayXd angles = cfg_.angle_grid.nodes();
    const double c = cfg_.band.center.meters();
    const double h = 0.5 * cfg_.band.width;
    const std::pair<const char*, double> lines[] = {{"curve_short", c - h}, {"curve_center", c}, {"curve_long", c + h}};
    for (const auto& [name, lambda] : lines) {
      out.push_back({name, timed(timings, name, [&] { return phasematch_curve(pm, Wavelength(lambda), angles); })});
    }
  } else if (kind == "farfield") {
    AngleMap map = timed(timings, "map", [&] { return far_field_map(pm, cfg_.band, cfg_.map_grid, cfg_.map_grid); });
    AngleMap slice = timed(timings, "slice", [&] { return far_field_slice(pm, pm.degenerate(), cfg_.map_grid, cfg_.map_grid); });
    const Eigen::Index mid = map.angle_y.size() / 2;
    Eigen::ArrayXd cut = map.intensity.col(mid);
    out.push_back({"cut_x", make_profile(map.angle_x, std::move(cut), ProfileAxis::ExteriorAngle, "map cut at angle_y = 0")});
    maps.push_back(std::move(map));
    maps.push_back(std::move(slice));
  }
  return out;
}

nlohmann::ordered_json metrics_json(const ProfileMetrics& m, ProfileAxis axis) {
  const double s = axis == ProfileAxis::Position ? 1e6 : 1e3;
  const std::string u = axis == ProfileAxis::Position ? "_um" : "_mrad";
  nlohmann::ordered_json j;
  j["fwhm" + u] = m.fwhm * s;
  j["centroid" + u] = m.centroid * s;
  j["edge_10_90" + u] = m.edge_width_10_90 * s;
  j["peak_position" + u] = m.peak_position * s;
  return j;
}

void finish(RunManifest& m) {
  write_text(m.directory / "manifest.json", manifest_json(m));
}

double parse_sweep_value(const std::string& param, const std::string& value) {
  RunConfig probe;
  apply_setting(probe, param, value);
  for (const auto& [k, v] : config_entries(probe)) {
    const auto dot = k.find('.');
    if (k == param || k.substr(dot + 1) == param) {
      if (v == "auto") return 0.0;
      return std::strtod(v.c_str(), nullptr);
    }
  }
  return 0.0;
}

}  // namespace

std::vector<ScenarioInfo> list_scenarios() {
  std::vector<ScenarioInfo> out;
  for (const auto& [name, p] : presets()) out.push_back({name, p.description});
  out.push_back({"custom", "image, point PSF and band PSF for the given configuration"});
  return out;
}

RunConfig scenario_config(const ScenarioSpec& spec) {
  RunConfig cfg;
  const auto it = presets().find(spec.name);
  if (it == presets().end() && spec.name != "custom") {
    throw ArgumentError("unknown scenario '" + spec.name + "'; registered: " + registered_names());
  }
  if (it != presets().end()) apply_config_text(cfg, it->second.config);
  if (spec.config) {
    std::ifstream in(*spec.config, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + spec.config->string());
    std::ostringstream os;
    os << in.rdbuf();
    apply_config_text(cfg, os.str());
  }
  for (const auto& [k, v] : spec.overrides) apply_setting(cfg, k, v);
  return cfg;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return 3;
  if (dynamic_cast<const ConvergenceError*>(&e) || dynamic_cast<const AliasingError*>(&e)) return 2;
  return 1;
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tool_version"] = m.version;
  j["scenario"] = m.scenario;
  j["status"] = m.exit_code == 0 ? "ok" : "error";
  j["exit_code"] = m.exit_code;
  if (!m.error.empty()) j["error"] = m.error;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.resolved_config) cfg[k] = v;
  j["config"] = cfg;
  j["config_snapshot"] = m.config_snapshot;
  j["artifacts"] = m.artifacts;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const MetricsRow& r : m.metrics) metrics[r.artifact] = metrics_json(r.metrics, r.axis);
  j["metrics"] = metrics;
  j["warnings"] = m.warnings;
  nlohmann::ordered_json timings = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.timings) timings[k] = v;
  j["timings_s"] = timings;
  return j.dump(2) + "\n";
}

RunManifest run_scenario(const ScenarioSpec& spec, const fs::path& out_dir) {
  const auto t0 = Clock::now();
  RunConfig cfg = scenario_config(spec);
  RunManifest m;
  m.scenario = spec.name;
  m.directory = out_dir / spec.name;
  std::error_code ec;
  fs::create_directories(m.directory, ec);
  if (ec) throw IoError("cannot create output directory " + m.directory.string() + ": " + ec.message());

  m.config_snapshot = write_config(cfg);
  m.resolved_config = config_entries(cfg);
  try {
    const RunConfig resolved = cfg.resolved();
    m.config_snapshot = write_config(resolved);
    m.resolved_config = config_entries(resolved);
    m.resolved_config.emplace_back("resolved.cut_angle", g17(resolved.phasematch.crystal.cut_angle) + " rad");
    write_text(m.directory / "config.cfg", m.config_snapshot);
    m.artifacts.push_back("config.cfg");

    Runner runner(resolved, spec.name);
    std::vector<AngleMap> maps;
    std::vector<Artifact> artifacts = runner.compute(m.timings, maps);

    std::vector<std::pair<std::string, ProfileMetrics>> rows;
    ProfileAxis axis = ProfileAxis::Position;
    for (Artifact& a : artifacts) {
      a.profile.label = a.name;
      const std::string file = a.name + ".csv";
      write_text(m.directory / file, format_profile_csv(a.profile, runner.header_));
      m.artifacts.push_back(file);
      axis = a.profile.axis;
      try {
        const ProfileMetrics pm = profile_metrics(a.profile);
        rows.emplace_back(a.name, pm);
        m.metrics.push_back({a.name, a.profile.axis, pm});
      } catch (const MetricsError& e) {
        m.warnings.push_back(a.name + ": " + e.what());
      }
    }
    const char* map_names[] = {"map.csv", "slice.csv"};
    for (std::size_t i = 0; i < maps.size() && i < 2; ++i) {
      write_text(m.directory / map_names[i], format_map_csv(maps[i], runner.header_));
      m.artifacts.push_back(map_names[i]);
    }
    write_text(m.directory / "metrics.csv", format_metrics_csv(rows, axis));
    m.artifacts.push_back("metrics.csv");

    if (spec.svg && !artifacts.empty()) {
      std::vector<Profile> profiles;
      for (const Artifact& a : artifacts) profiles.push_back(a.profile);
      emit_svg(profiles, SvgStyle{spec.name}, m.directory / (spec.name + ".svg"));
      m.artifacts.push_back(spec.name + ".svg");
    }
  } catch (const Error& e) {
    m.exit_code = exit_code_for(e);
    m.error = e.what();
  }
  m.artifacts.push_back("manifest.json");
  m.timings.emplace_back("total", std::chrono::duration<double>(Clock::now() - t0).count());
  finish(m);
  return m;
}

RunManifest sweep(const std::string& param, const std::vector<std::string>& values, const ScenarioSpec& base,
                  const fs::path& out_dir) {
  if (values.empty()) throw ArgumentError("sweep needs at least one value");
  bool numeric = false;
  try {
    numeric = is_numeric_key(param);
  } catch (const ParseError& e) {
    throw ArgumentError(std::string("sweep parameter: ") + e.what());
  }
  if (!numeric) throw ArgumentError("sweep parameter '" + param + "' is not a numeric key");
  scenario_config(base);

  const auto t0 = Clock::now();
  RunManifest m;
  m.scenario = base.name + "_sweep";
  m.directory = out_dir / m.scenario;
  std::error_code ec;
  fs::create_directories(m.directory, ec);
  if (ec) throw IoError("cannot create output directory " + m.directory.string() + ": " + ec.message());
  m.config_snapshot = write_config(scenario_config(base));
  m.resolved_config = config_entries(scenario_config(base));

  std::ostringstream csv;
  csv << "# tool_version = " << kToolVersion << "\n# scenario = " << base.name << "\n# parameter = " << param << "\n";
  csv << "value,numerical_aperture,run,artifact,unit,fwhm,centroid,edge_10_90,status\n";
  int failures = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ScenarioSpec item = base;
    item.name = base.name;
    item.overrides.emplace_back(param, values[i]);
    const std::string run = "run" + std::to_string(i);
    std::string status = "ok";
    RunManifest r;
    double value = 0.0;
    double na = 0.0;
    try {
      value = parse_sweep_value(param, values[i]);
      const RunConfig c = scenario_config(item);
      na = c.geometry.numerical_aperture();
      r = run_scenario(item, m.directory / run);
      if (r.exit_code != 0) status = "error: " + r.error;
    } catch (const Error& e) {
      status = std::string("error: ") + e.what();
      r.exit_code = exit_code_for(e);
    }
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    if (r.exit_code != 0) {
      ++failures;
      m.warnings.push_back(values[i] + ": " + status);
      csv << g17(value) << "," << g12(na) << "," << run << ",,,,,," << status << "\n";
      continue;
    }
    for (const std::string& a : r.artifacts) m.artifacts.push_back(run + "/" + item.name + "/" + a);
    if (r.metrics.empty()) csv << g17(value) << "," << g12(na) << "," << run << ",,,,,," << status << "\n";
    for (const MetricsRow& row : r.metrics) {
      const double s = row.axis == ProfileAxis::Position ? 1e6 : 1e3;
      csv << g17(value) << "," << g12(na) << "," << run << "," << row.artifact << ","
          << (row.axis == ProfileAxis::Position ? "um" : "mrad") << "," << g12(row.metrics.fwhm * s) << ","
          << g12(row.metrics.centroid * s) << "," << g12(row.metrics.edge_width_10_90 * s) << "," << status << "\n";
      m.metrics.push_back({run + "/" + row.artifact, row.axis, row.metrics});
    }
    m.timings.emplace_back(run, r.timings.empty() ? 0.0 : r.timings.back().second);
  }
  write_text(m.directory / "sweep_metrics.csv", csv.str());
  m.artifacts.push_back("sweep_metrics.csv");
  m.artifacts.push_back("manifest.json");
  if (failures == static_cast<int>(values.size())) {
    m.exit_code = 1;
    m.error = "every sweep value failed";
  }
  m.timings.emplace_back("total", std::chrono::duration<double>(Clock::now() - t0).count());
  finish(m);
  return m;
}

}  // namespace ghostsim::app
