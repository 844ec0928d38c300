#include <doctest.h>

#include <cmath>

#include "ghostsim/dispersion.hpp"
#include "ghostsim/errors.hpp"

using namespace ghostsim;

namespace {

// Independent evaluation of n^2 = A + B/(l^2 - C) - D l^2 in long double.
long double sellmeier(long double a, long double b, long double c, long double d, long double um) {
  return std::sqrt(a + b / (um * um - c) - d * um * um);
}

}  // namespace

TEST_CASE("wavelength unit helpers") {
  CHECK(nanometers(810.0).meters() == doctest::Approx(810e-9).epsilon(1e-15));
  CHECK(micrometers(0.81).nanometers() == doctest::Approx(810.0).epsilon(1e-15));
  CHECK(nanometers(405.0).vacuum_wavenumber() == doctest::Approx(2 * std::numbers::pi / 405e-9).epsilon(1e-15));
  CHECK(nanometers(405.0) < nanometers(810.0));
}

TEST_CASE("BBO indices against the tabulated dispersion formula") {
  const CrystalSpec c = bbo(3e-3);
  for (double nm : {405.0, 805.0, 810.0, 815.0, 1064.0}) {
    const long double um = nm / 1000.0L;
    CHECK(n_o(c, nanometers(nm)) == doctest::Approx(double(sellmeier(2.7359L, 0.01878L, 0.01822L, 0.01354L, um))).epsilon(1e-14));
    CHECK(n_e_principal(c, nanometers(nm)) ==
          doctest::Approx(double(sellmeier(2.3753L, 0.01224L, 0.01667L, 0.01516L, um))).epsilon(1e-14));
  }
  // Hand values rounded to five places.
  CHECK(n_o(c, nanometers(810.0)) == doctest::Approx(1.66026).epsilon(3e-6));
  CHECK(n_e_principal(c, nanometers(810.0)) == doctest::Approx(1.54418).epsilon(3e-6));
}

TEST_CASE("extraordinary index interpolates between the principal values") {
  const CrystalSpec c = bbo(3e-3);
  const Wavelength l = nanometers(810.0);
  CHECK(n_e_at_angle(c, l, 0.0) == doctest::Approx(n_o(c, l)).epsilon(1e-15));
  CHECK(n_e_at_angle(c, l, std::numbers::pi / 2) == doctest::Approx(n_e_principal(c, l)).epsilon(1e-15));
  const double t = 0.7;
  const double no = n_o(c, l), ne = n_e_principal(c, l);
  const double expected = 1.0 / std::sqrt(std::cos(t) * std::cos(t) / (no * no) + std::sin(t) * std::sin(t) / (ne * ne));
  CHECK(n_e_at_angle(c, l, t) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("dn_e/dtheta matches a central difference") {
  const CrystalSpec c = bbo(3e-3);
  for (double nm : {405.0, 810.0, 1500.0}) {
    for (double t : {0.2, 0.5, 0.7294, 1.2}) {
      const double h = 1e-5;
      const double fd = (n_e_at_angle(c, nanometers(nm), t + h) - n_e_at_angle(c, nanometers(nm), t - h)) / (2 * h);
      const double an = dn_e_dtheta(c, nanometers(nm), t);
      CHECK(std::abs(an - fd) <= 1e-6 * std::abs(an));
    }
  }
}

TEST_CASE("wavevector and validation") {
  CHECK(wavevector(nanometers(810.0), 1.5) == doctest::Approx(2 * std::numbers::pi * 1.5 / 810e-9).epsilon(1e-15));
  CHECK_THROWS_AS(wavevector(nanometers(810.0), 0.0), PreconditionError);
  CHECK_THROWS_AS(bbo(-1e-3).validate(), DomainError);
  CHECK_NOTHROW(bbo(3e-3, 0.7).validate());
  CHECK(bbo(3e-3).in_band(nanometers(810.0)));
  CHECK_FALSE(bbo(3e-3).in_band(nanometers(3000.0)));
}
