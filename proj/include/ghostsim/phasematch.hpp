#pragma once

// Longitudinal phase mismatch, acceptance angles, and phase-matching curves
// for collinear-pumped SPDC in a uniaxial crystal.
//
// Conventions: kappa is the transverse wavevector (rad/m) of the signal unless
// stated otherwise; the idler carries -kappa. The extraordinary signal sees
// n_e at (cut angle + in-plane ray angle), so positive kappa moves the ray
// away from the optic axis. sinc(x) = sin(x)/x.

#include <Eigen/Core>

#include "ghostsim/dispersion.hpp"
#include "ghostsim/numerics.hpp"
#include "ghostsim/profile.hpp"
#include "ghostsim/spectrum.hpp"

namespace ghostsim {

/// sin(x)/x with sinc(0) = 1.
double sinc(double x);

enum class InteractionType { TypeI, TypeII };
enum class Approximation { Full, LinearDominant };

struct PhaseMatchConfig {
  CrystalSpec crystal;
  Wavelength pump = nanometers(405.0);
  InteractionType type = InteractionType::TypeII;
  Approximation approximation = Approximation::Full;

  Wavelength degenerate() const { return Wavelength(2.0 * pump.meters()); }
  /// Crystal invariants plus pump/degenerate wavelengths inside the band.
  void validate() const;
};

/// Transverse wavevector component, rad/m.
class TransverseK {
 public:
  constexpr explicit TransverseK(double value) : value_(value) {}
  constexpr double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Cut angle giving collinear degenerate matching at pump `pump`:
/// type II  k_p^e = k_s^e + k_i^o,  type I  k_p^e = 2 k^o.
/// Throws DomainError if either wavelength is out of band and
/// UnsolvableGeometryError if no angle in (0, pi/2) matches.
double solve_cut_angle(const CrystalSpec& crystal, Wavelength pump,
                       InteractionType type = InteractionType::TypeII);

/// Copy of `cfg` with the crystal's cut angle replaced by solve_cut_angle().
PhaseMatchConfig with_solved_cut_angle(PhaseMatchConfig cfg);

/// Mismatch dk(kappa) = residual + linear kappa + quadratic kappa^2 for the
/// signal at `signal` and its energy-conserving idler.
struct MismatchModel {
  double residual = 0.0;
  double linear = 0.0;
  double quadratic = 0.0;
  double signal_k = 0.0;  ///< |k_s| inside the crystal
  double idler_k = 0.0;

  double operator()(double kappa) const { return residual + kappa * (linear + quadratic * kappa); }
};

MismatchModel mismatch_model(const PhaseMatchConfig& cfg, Wavelength signal);

/// kappa = 0 mismatch k_p - k_s - k_i of the pair from full dispersion.
double collinear_mismatch(const PhaseMatchConfig& cfg, Wavelength signal);

double delta_kz_type1_degenerate(const PhaseMatchConfig& cfg, TransverseK kappa);
double delta_kz_type1_nondegenerate(const PhaseMatchConfig& cfg, TransverseK kappa_s, Wavelength signal);
double delta_kz_type2(const PhaseMatchConfig& cfg, TransverseK kappa_s, Wavelength signal);

/// sqrt(lambda / (n_o L)), interior radians.
double theta_max_type1(const PhaseMatchConfig& cfg, Wavelength lambda);
/// lambda / (L |dn_e/dtheta|) at the cut angle, interior radians.
double theta_max_type2(const PhaseMatchConfig& cfg, Wavelength lambda);

/// Paraxial refraction at the exit face.
constexpr double interior_to_exterior(double theta_internal, double index) { return index * theta_internal; }

/// Refractive index seen by the signal at the cut angle (n_e for type II,
/// n_o for type I).
double signal_index(const PhaseMatchConfig& cfg, Wavelength signal);

/// sinc^2(dk L / 2) against exterior signal angle (radians) using the full
/// mismatch model. The grid must be symmetric about zero with >= 256 points.
Profile phasematch_curve(const PhaseMatchConfig& cfg, Wavelength signal, const Eigen::ArrayXd& exterior_angles);

struct AngleMap {
  Eigen::ArrayXd angle_x;      ///< exterior, walk-off plane, radians
  Eigen::ArrayXd angle_y;      ///< exterior, perpendicular, radians
  Eigen::ArrayXXd intensity;   ///< rows follow angle_x, columns angle_y
};

/// Far-field emission at one signal wavelength from exact 3D wavevectors:
/// the mean of the e-polarized signal cone and the o-polarized idler cone
/// seen at each exterior direction. Unity at the matched forward direction.
AngleMap far_field_slice(const PhaseMatchConfig& cfg, Wavelength signal, const GridSpec& x, const GridSpec& y);

/// Band-weighted sum of far_field_slice(), normalized to peak 1. Both grids
/// must span at least +-10 mrad.
AngleMap far_field_map(const PhaseMatchConfig& cfg, const SpectralBand& band, const GridSpec& x, const GridSpec& y);

}  // namespace ghostsim
