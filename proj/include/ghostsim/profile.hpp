#pragma once

// Sampled 1D intensity curves and their shape metrics.

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

namespace ghostsim {

enum class ProfileAxis { Position, ExteriorAngle };

/// Intensity sampled on a strictly increasing grid. Position grids are in
/// meters, angle grids in radians (exterior).
struct Profile {
  Eigen::ArrayXd grid;
  Eigen::ArrayXd values;
  ProfileAxis axis = ProfileAxis::Position;
  std::string label;
  std::vector<std::pair<std::string, std::string>> metadata;
  bool normalized = false;
  double normalization = 1.0;  ///< raw peak divided out when normalized

  void validate() const;
  void add_metadata(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }
};

/// Builds a profile, dividing by the peak unless `raw`. Throws ArgumentError on
/// size mismatch, non-increasing grid, or negative/non-finite values.
Profile make_profile(Eigen::ArrayXd grid, Eigen::ArrayXd values, ProfileAxis axis, std::string label, bool raw = false);

struct ProfileMetrics {
  double fwhm = 0.0;
  double centroid = 0.0;
  double edge_width_10_90 = 0.0;  ///< rising (left) edge
  double peak = 0.0;
  double peak_position = 0.0;
};

/// Throws MetricsError for empty or flat profiles and when the half-maximum or
/// 10% level is not crossed on both sides of the peak.
ProfileMetrics profile_metrics(const Profile& p);

}  // namespace ghostsim
