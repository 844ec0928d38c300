#include <doctest.h>

#include "ghostsim/errors.hpp"
#include "ghostsim/numerics.hpp"
#include "ghostsim/profile.hpp"

using namespace ghostsim;

TEST_CASE("Gaussian metrics") {
  const double s = 20e-6, mu = 13e-6;
  const Eigen::ArrayXd x = GridSpec{-300e-6, 300e-6, 6001}.nodes();
  const Eigen::ArrayXd y = (-0.5 * ((x - mu) / s).square()).exp() * 7.0;
  const Profile p = make_profile(x, y, ProfileAxis::Position, "g");
  CHECK(p.normalized);
  CHECK(p.normalization == doctest::Approx(7.0).epsilon(1e-6));
  const ProfileMetrics m = profile_metrics(p);
  CHECK(m.fwhm == doctest::Approx(2 * std::sqrt(2 * std::log(2.0)) * s).epsilon(1e-5));
  CHECK(m.centroid == doctest::Approx(mu).epsilon(1e-6));
  const double edge = s * (std::sqrt(2 * std::log(10.0)) - std::sqrt(2 * std::log(10.0 / 9.0)));
  CHECK(m.edge_width_10_90 == doctest::Approx(edge).epsilon(1e-4));
  CHECK(m.peak == doctest::Approx(1.0));
}

TEST_CASE("raw profiles keep their scale") {
  Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(5, 0, 4);
  Eigen::ArrayXd y(5);
  y << 0, 1, 4, 1, 0;
  const Profile p = make_profile(x, y, ProfileAxis::Position, "raw", true);
  CHECK_FALSE(p.normalized);
  CHECK(p.values(2) == 4.0);
  const ProfileMetrics m = profile_metrics(p);
  CHECK(m.fwhm == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("invalid profiles") {
  Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(4, 0, 3);
  CHECK_THROWS_AS(make_profile(x, Eigen::ArrayXd::Ones(3), ProfileAxis::Position, ""), ArgumentError);
  Eigen::ArrayXd bad(4);
  bad << 0, 2, 1, 3;
  CHECK_THROWS_AS(make_profile(bad, Eigen::ArrayXd::Ones(4), ProfileAxis::Position, ""), ArgumentError);
  Eigen::ArrayXd neg(4);
  neg << 0, -1, 1, 0;
  CHECK_THROWS_AS(make_profile(x, neg, ProfileAxis::Position, ""), ArgumentError);

  CHECK_THROWS_AS(profile_metrics(make_profile(x, Eigen::ArrayXd::Ones(4), ProfileAxis::Position, "")), MetricsError);
  CHECK_THROWS_AS(profile_metrics(make_profile(x, Eigen::ArrayXd::Zero(4), ProfileAxis::Position, "", true)), MetricsError);
  Eigen::ArrayXd edge(4);
  edge << 1, 0.8, 0.2, 0;
  CHECK_THROWS_AS(profile_metrics(make_profile(x, edge, ProfileAxis::Position, "")), MetricsError);
}
