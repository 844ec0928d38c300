#pragma once

// Refractive-index model for uniaxial crystals.
//
// All lengths are SI meters and all angles radians. Sellmeier coefficients use
// the conventional micrometer wavelength scale:
//
//   n^2(lambda) = A + B / (lambda^2 - C) - D lambda^2      (lambda in um)
//
// The built-in BBO coefficients are the widely used set
//   n_o^2 = 2.7359 + 0.01878 / (lambda^2 - 0.01822) - 0.01354 lambda^2
//   n_e^2 = 2.3753 + 0.01224 / (lambda^2 - 0.01667) - 0.01516 lambda^2
// taken as valid over 0.2-2.6 um.

#include <cmath>
#include <numbers>
#include <string>

namespace ghostsim {

/// Vacuum wavelength in meters.
class Wavelength {
 public:
  constexpr explicit Wavelength(double meters) : meters_(meters) {}

  constexpr double meters() const noexcept { return meters_; }
  constexpr double micrometers() const noexcept { return meters_ * 1e6; }
  constexpr double nanometers() const noexcept { return meters_ * 1e9; }
  /// 2 pi / lambda, rad/m.
  constexpr double vacuum_wavenumber() const noexcept { return 2.0 * std::numbers::pi / meters_; }

  friend constexpr bool operator==(Wavelength, Wavelength) = default;
  friend constexpr auto operator<=>(Wavelength, Wavelength) = default;

 private:
  double meters_;
};

constexpr Wavelength nanometers(double value) { return Wavelength(value / 1e9); }
constexpr Wavelength micrometers(double value) { return Wavelength(value / 1e6); }

struct SellmeierCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  /// Index at `lambda_um` (micrometers). No band check.
  template <class Scalar>
  Scalar index(Scalar lambda_um) const {
    const Scalar l2 = lambda_um * lambda_um;
    return std::sqrt(Scalar(a) + Scalar(b) / (l2 - Scalar(c)) - Scalar(d) * l2);
  }

  friend bool operator==(const SellmeierCoefficients&, const SellmeierCoefficients&) = default;
};

/// Uniaxial crystal: material dispersion plus cut geometry.
struct CrystalSpec {
  std::string material = "BBO";
  SellmeierCoefficients ordinary;
  SellmeierCoefficients extraordinary;  ///< principal extraordinary index
  double valid_min = 0.0;               ///< Sellmeier validity band, meters
  double valid_max = 0.0;
  double cut_angle = 0.0;  ///< optic axis to crystal z-axis, radians
  double length = 0.0;     ///< meters

  /// Throws DomainError if length, cut angle, or band are unphysical.
  void validate() const;
  bool in_band(Wavelength lambda) const noexcept {
    return lambda.meters() >= valid_min && lambda.meters() <= valid_max;
  }
};

/// BBO with the built-in coefficient set. `cut_angle` may be left at zero and
/// filled in later by solve_cut_angle().
CrystalSpec bbo(double length, double cut_angle = 0.0);

double n_o(const CrystalSpec& crystal, Wavelength lambda);
/// Principal extraordinary index (propagation perpendicular to the optic axis).
double n_e_principal(const CrystalSpec& crystal, Wavelength lambda);

/// Extraordinary index at angle `theta` from the optic axis, from the index
/// ellipsoid 1/n^2 = cos^2/n_o^2 + sin^2/n_e^2.
double n_e_at_angle(const CrystalSpec& crystal, Wavelength lambda, double theta);

/// d n_e(theta) / d theta, analytic.
double dn_e_dtheta(const CrystalSpec& crystal, Wavelength lambda, double theta);

/// |k| = 2 pi n / lambda in rad/m. Throws PreconditionError for n <= 0.
double wavevector(Wavelength lambda, double index);

}  // namespace ghostsim
