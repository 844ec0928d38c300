#include <doctest.h>

#include "ghostsim/errors.hpp"
#include "ghostsim/phasematch.hpp"

using namespace ghostsim;

namespace {

PhaseMatchConfig config(double length, InteractionType type = InteractionType::TypeII) {
  PhaseMatchConfig c;
  c.crystal = bbo(length);
  c.type = type;
  return with_solved_cut_angle(c);
}

double k_of(double lambda, double n) { return 2 * std::numbers::pi * n / lambda; }

}  // namespace

TEST_CASE("sinc") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(1e-6) == doctest::Approx(1.0 - 1e-12 / 6));
  CHECK(sinc(std::numbers::pi) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(sinc(2.0) == doctest::Approx(std::sin(2.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("solved cut angle removes the collinear mismatch") {
  for (auto type : {InteractionType::TypeII, InteractionType::TypeI}) {
    const PhaseMatchConfig c = config(3e-3, type);
    CHECK(c.crystal.cut_angle > 0.0);
    CHECK(c.crystal.cut_angle < std::numbers::pi / 2);
    const Wavelength deg = c.degenerate();
    // Oracle: recompute the mismatch from the indices directly.
    const double kp = k_of(405e-9, n_e_at_angle(c.crystal, c.pump, c.crystal.cut_angle));
    const double ks = k_of(810e-9, type == InteractionType::TypeII ? n_e_at_angle(c.crystal, deg, c.crystal.cut_angle)
                                                                   : n_o(c.crystal, deg));
    const double ki = k_of(810e-9, n_o(c.crystal, deg));
    CHECK(std::abs(kp - ks - ki) < 1e-9 * kp);
    CHECK(std::abs(collinear_mismatch(c, deg)) < 1e-9 * kp);
  }
  CHECK(config(3e-3).crystal.cut_angle > config(3e-3, InteractionType::TypeI).crystal.cut_angle);
}

TEST_CASE("cut-angle solver errors") {
  CrystalSpec iso = bbo(3e-3);
  iso.extraordinary = iso.ordinary;
  CHECK_THROWS_AS(solve_cut_angle(iso, nanometers(405.0)), UnsolvableGeometryError);
  CHECK_THROWS_AS(solve_cut_angle(bbo(3e-3), nanometers(1500.0)), DomainError);
  CHECK_THROWS_AS(idler_wavelength(nanometers(405.0), nanometers(400.0)), DomainError);
}

TEST_CASE("mismatch model agrees with the direct expressions") {
  const PhaseMatchConfig c = config(3e-3);
  const Wavelength s = nanometers(805.0);
  const MismatchModel m = mismatch_model(c, s);
  CHECK(m(0.0) == doctest::Approx(collinear_mismatch(c, s)).epsilon(1e-14));
  CHECK(delta_kz_type2(c, TransverseK(1e4), s) == doctest::Approx(m(1e4)).epsilon(1e-14));
  const double n = n_e_at_angle(c.crystal, s, c.crystal.cut_angle);
  CHECK(m.linear == doctest::Approx(-dn_e_dtheta(c.crystal, s, c.crystal.cut_angle) / n).epsilon(1e-14));

  PhaseMatchConfig lin = c;
  lin.approximation = Approximation::LinearDominant;
  CHECK(mismatch_model(lin, s).quadratic == 0.0);

  const PhaseMatchConfig t1 = config(3e-3, InteractionType::TypeI);
  const double k = k_of(810e-9, n_o(t1.crystal, t1.degenerate()));
  CHECK(delta_kz_type1_degenerate(t1, TransverseK(2e4)) == doctest::Approx(4e8 / k).epsilon(1e-14));
  CHECK(delta_kz_type1_nondegenerate(t1, TransverseK(0.0), nanometers(810.0)) ==
        doctest::Approx(collinear_mismatch(t1, nanometers(810.0))));
}

TEST_CASE("type and paraxial guards") {
  const PhaseMatchConfig t2 = config(3e-3);
  const PhaseMatchConfig t1 = config(3e-3, InteractionType::TypeI);
  CHECK_THROWS_AS(delta_kz_type1_degenerate(t2, TransverseK(0.0)), PreconditionError);
  CHECK_THROWS_AS(delta_kz_type1_nondegenerate(t2, TransverseK(0.0), nanometers(810.0)), PreconditionError);
  CHECK_THROWS_AS(delta_kz_type2(t1, TransverseK(0.0), nanometers(810.0)), PreconditionError);
  CHECK_THROWS_AS(delta_kz_type2(t2, TransverseK(1e7), nanometers(810.0)), PreconditionError);
}

TEST_CASE("acceptance angles follow their closed forms") {
  const PhaseMatchConfig c = config(3e-3);
  const Wavelength l = nanometers(810.0);
  CHECK(theta_max_type1(c, l) == doctest::Approx(std::sqrt(810e-9 / (n_o(c.crystal, l) * 3e-3))).epsilon(1e-15));
  CHECK(theta_max_type2(c, l) ==
        doctest::Approx(810e-9 / (3e-3 * std::abs(dn_e_dtheta(c.crystal, l, c.crystal.cut_angle)))).epsilon(1e-15));
  CHECK(theta_max_type2(c, l) < theta_max_type1(c, l) / 3);
  CHECK(interior_to_exterior(0.01, 1.6) == doctest::Approx(0.016));
}

TEST_CASE("phase-matching curve") {
  const PhaseMatchConfig c = config(3e-3);
  const Eigen::ArrayXd a = GridSpec{-15e-3, 15e-3, 1025}.nodes();
  const Profile p = phasematch_curve(c, c.degenerate(), a);
  CHECK(p.axis == ProfileAxis::ExteriorAngle);
  CHECK(p.values(512) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK((p.values <= 1.0 + 1e-15).all());
  CHECK_THROWS_AS(phasematch_curve(c, c.degenerate(), GridSpec{-15e-3, 15e-3, 128}.nodes()), ArgumentError);
  CHECK_THROWS_AS(phasematch_curve(c, c.degenerate(), GridSpec{-10e-3, 15e-3, 512}.nodes()), ArgumentError);
  // Shorter crystals accept proportionally wider angles near degeneracy.
  const double w3 = profile_metrics(p).fwhm;
  const double w6 = profile_metrics(phasematch_curve(config(6e-3), c.degenerate(), a)).fwhm;
  CHECK(w3 / w6 == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("far field is mirror symmetric across the walk-off plane") {
  const PhaseMatchConfig c = config(3e-3);
  const GridSpec g{-12e-3, 12e-3, 41};
  const AngleMap s = far_field_slice(c, c.degenerate(), g, g);
  CHECK(s.intensity.rows() == 41);
  CHECK(s.intensity.cols() == 41);
  for (Eigen::Index i = 0; i < 41; ++i) {
    for (Eigen::Index j = 0; j < 41; ++j) CHECK(s.intensity(i, j) == s.intensity(i, 40 - j));
  }
  CHECK(s.intensity(20, 20) == doctest::Approx(1.0).epsilon(1e-6));

  SpectralBand band;
  band.samples = 5;
  const AngleMap m = far_field_map(c, band, g, g);
  CHECK(m.intensity.maxCoeff() == doctest::Approx(1.0));
  for (Eigen::Index i = 0; i < 41; ++i) {
    for (Eigen::Index j = 0; j < 41; ++j) CHECK(m.intensity(i, j) == m.intensity(i, 40 - j));
  }
  CHECK_THROWS_AS(far_field_map(c, band, GridSpec{-5e-3, 5e-3, 21}, g), ArgumentError);
}
