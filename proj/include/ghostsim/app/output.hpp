#pragma once

// CSV and SVG serialization. Spatial axes are written in um, angular axes in
// mrad (exterior); conversion happens only here.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ghostsim/phasematch.hpp"
#include "ghostsim/profile.hpp"

namespace ghostsim::app {

using HeaderEntries = std::vector<std::pair<std::string, std::string>>;

/// Columns x2s_um,intensity (or angle_mrad_exterior,intensity) after a
/// '#'-prefixed header of `header` and the profile's own metadata.
std::string format_profile_csv(const Profile& p, const HeaderEntries& header);
/// Columns angle_x_mrad,angle_y_mrad,intensity.
std::string format_map_csv(const AngleMap& map, const HeaderEntries& header);
std::string format_metrics_csv(const std::vector<std::pair<std::string, ProfileMetrics>>& rows, ProfileAxis axis);

/// Writes `text` to `path`, throwing IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

struct SvgStyle {
  std::string title;
  int width = 800;
  int height = 500;
};

/// Self-contained SVG line plot, one polyline per profile. Throws
/// ArgumentError for an empty list or mixed axis units.
std::string format_svg(const std::vector<Profile>& profiles, const SvgStyle& style);
void emit_svg(const std::vector<Profile>& profiles, const SvgStyle& style, const std::filesystem::path& path);

}  // namespace ghostsim::app
