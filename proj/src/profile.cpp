#include "ghostsim/profile.hpp"

#include <cmath>

#include "ghostsim/errors.hpp"

namespace ghostsim {
namespace {

double crossing(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y, Eigen::Index inside, Eigen::Index outside,
                double level) {
  const double t = (level - y(outside)) / (y(inside) - y(outside));
  return x(outside) + t * (x(inside) - x(outside));
}

// Walks from the peak towards `dir` until the level is crossed.
double find_crossing(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y, Eigen::Index peak, int dir, double level) {
  Eigen::Index i = peak;
  while (true) {
    const Eigen::Index next = i + dir;
    if (next < 0 || next >= y.size()) throw MetricsError("profile does not fall below the requested level");
    if (y(next) < level) return crossing(x, y, i, next, level);
    i = next;
  }
}

}  // namespace

void Profile::validate() const {
  if (grid.size() != values.size()) throw ArgumentError("profile grid and values differ in length");
  for (Eigen::Index i = 1; i < grid.size(); ++i) {
    if (!(grid(i) > grid(i - 1))) throw ArgumentError("profile grid must be strictly increasing");
  }
  if (!values.isFinite().all() || (values.size() > 0 && values.minCoeff() < 0.0)) {
    throw ArgumentError("profile values must be finite and non-negative");
  }
}

Profile make_profile(Eigen::ArrayXd grid, Eigen::ArrayXd values, ProfileAxis axis, std::string label, bool raw) {
  Profile p;
  p.grid = std::move(grid);
  p.values = std::move(values);
  p.axis = axis;
  p.label = std::move(label);
  p.validate();
  if (!raw && p.values.size() > 0) {
    const double peak = p.values.maxCoeff();
    if (peak > 0.0) {
      p.values /= peak;
      p.normalization = peak;
      p.normalized = true;
    }
  }
  return p;
}

ProfileMetrics profile_metrics(const Profile& p) {
  p.validate();
  if (p.values.size() < 3) throw MetricsError("profile has fewer than three samples");
  const Eigen::ArrayXd& x = p.grid;
  const Eigen::ArrayXd& y = p.values;
  Eigen::Index ipk = 0;
  const double peak = y.maxCoeff(&ipk);
  if (!(peak > 0.0) || y.minCoeff() == peak) throw MetricsError("profile is flat or identically zero");

  ProfileMetrics m;
  m.peak = peak;
  m.peak_position = x(ipk);
  m.fwhm = find_crossing(x, y, ipk, +1, 0.5 * peak) - find_crossing(x, y, ipk, -1, 0.5 * peak);
  m.edge_width_10_90 = find_crossing(x, y, ipk, -1, 0.9 * peak) - find_crossing(x, y, ipk, -1, 0.1 * peak);

  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const double h = 0.5 * (x(i + 1) - x(i));
    num += h * (x(i) * y(i) + x(i + 1) * y(i + 1));
    den += h * (y(i) + y(i + 1));
  }
  m.centroid = num / den;
  return m;
}

}  // namespace ghostsim
