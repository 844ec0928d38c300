#include "ghostsim/dispersion.hpp"

#include <cstdio>

#include "ghostsim/errors.hpp"

namespace ghostsim {
namespace {

void require_band(const CrystalSpec& crystal, Wavelength lambda) {
  if (!crystal.in_band(lambda)) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "wavelength %.6g nm outside %s validity band %.6g-%.6g nm",
                  lambda.nanometers(), crystal.material.c_str(), crystal.valid_min * 1e9,
                  crystal.valid_max * 1e9);
    throw DomainError(buf);
  }
}

void require_angle(double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
    throw DomainError("propagation angle " + std::to_string(theta) + " rad outside [0, pi/2]");
  }
}

}  // namespace

void CrystalSpec::validate() const {
  if (!(length > 0.0)) throw DomainError("crystal length must be positive");
  if (!(cut_angle > 0.0 && cut_angle < std::numbers::pi / 2)) {
    throw DomainError("cut angle must lie in (0, pi/2)");
  }
  if (!(valid_min > 0.0 && valid_min < valid_max)) {
    throw DomainError("crystal validity band must satisfy 0 < min < max");
  }
}

CrystalSpec bbo(double length, double cut_angle) {
  CrystalSpec c;
  c.material = "BBO";
  c.ordinary = {2.7359, 0.01878, 0.01822, 0.01354};
  c.extraordinary = {2.3753, 0.01224, 0.01667, 0.01516};
  c.valid_min = 0.2e-6;
  c.valid_max = 2.6e-6;
  c.cut_angle = cut_angle;
  c.length = length;
  return c;
}

double n_o(const CrystalSpec& crystal, Wavelength lambda) {
  require_band(crystal, lambda);
  return crystal.ordinary.index(lambda.micrometers());
}

double n_e_principal(const CrystalSpec& crystal, Wavelength lambda) {
  require_band(crystal, lambda);
  return crystal.extraordinary.index(lambda.micrometers());
}

double n_e_at_angle(const CrystalSpec& crystal, Wavelength lambda, double theta) {
  require_angle(theta);
  const double no = n_o(crystal, lambda);
  const double ne = n_e_principal(crystal, lambda);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return 1.0 / std::sqrt(c * c / (no * no) + s * s / (ne * ne));
}

double dn_e_dtheta(const CrystalSpec& crystal, Wavelength lambda, double theta) {
  require_angle(theta);
  const double no = n_o(crystal, lambda);
  const double ne = n_e_principal(crystal, lambda);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double n = 1.0 / std::sqrt(c * c / (no * no) + s * s / (ne * ne));
  return n * n * n * s * c * (1.0 / (no * no) - 1.0 / (ne * ne));
}

double wavevector(Wavelength lambda, double index) {
  if (!(index > 0.0)) throw PreconditionError("refractive index must be positive");
  return lambda.vacuum_wavenumber() * index;
}

}  // namespace ghostsim
