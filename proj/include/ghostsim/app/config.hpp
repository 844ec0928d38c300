#pragma once

// Run configuration: flat `key = value unit` text with [section] headers.
//
//   [crystal]
//   length = 3 mm
//   cut_angle = auto
//   [geometry]
//   d2 = 50 mm
//
// Lengths accept nm, um, mm, m; angles mrad, rad, deg. Dimensionless keys
// take no unit. Keys may be written bare when the name is unique.

#include <filesystem>
#include <string>
#include <vector>

#include "ghostsim/imaging.hpp"
#include "ghostsim/phasematch.hpp"

namespace ghostsim::app {

struct RunConfig {
  PhaseMatchConfig phasematch;
  bool auto_cut_angle = true;
  ImagingGeometry geometry;
  SpectralBand band;
  DetectorModel detector;
  Wavelength signal = nanometers(810.0);
  GridSpec x_grid{-600e-6, 600e-6, 1024};
  GridSpec angle_grid{-15e-3, 15e-3, 1024};
  GridSpec map_grid{-40e-3, 40e-3, 161};
  ImagingOptions imaging;

  /// Default configuration: BBO, L = 3 mm, pump 405 nm, type II, a_p = 1.5 mm,
  /// d_2 = 50 mm, 160 um slit, 810 +- 5 nm top-hat band with 41 samples.
  RunConfig();

  /// Copy with the cut angle solved when set to auto; validates everything.
  RunConfig resolved() const;
};

/// Applies one `key = value` assignment. `key` is "section.name" or a unique
/// bare name. Throws ParseError (line 0) on unknown keys, bad units, or
/// out-of-range values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, int line = 0);

/// Parses configuration text on top of `cfg`.
void apply_config_text(RunConfig& cfg, const std::string& text);

/// Reads a configuration file on top of the defaults. Throws IoError when the
/// file cannot be read and ParseError with the line number otherwise.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text);

/// Every key in canonical "section.name" form.
std::vector<std::string> config_keys();

/// True when the key takes a numeric value.
bool is_numeric_key(const std::string& key);

/// Resolved value of every key as written to a snapshot (SI units).
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg);

/// Snapshot text that parses back to an identical configuration.
std::string write_config(const RunConfig& cfg);

}  // namespace ghostsim::app
