#pragma once

// Correlated-count images and point-spread functions of the ghost-imaging
// arm: direct nested quadrature, the x_os-integrated Fourier form, the fully
// phase-matched limit, and spectral combination for slow and fast detectors.
//
// Profiles are sampled at image-plane positions x_2s (meters).

#include <Eigen/Core>
#include <numbers>
#include <string>

#include "ghostsim/numerics.hpp"
#include "ghostsim/phasematch.hpp"
#include "ghostsim/profile.hpp"
#include "ghostsim/spectrum.hpp"

namespace ghostsim {

struct ImagingGeometry {
  double pump_radius = 1.5e-3;  ///< a_p, 1/e field radius of exp(-x^2/a_p^2)
  double distance = 50e-3;      ///< d_2, crystal to ghost-image plane
  double slit_width = 160e-6;   ///< w; zero selects the point-detector PSF
  double slit_center = 0.0;     ///< center of the x_1i range
  std::string slit_plane_tag = "z1i";

  double numerical_aperture() const { return pump_radius / distance; }
  void validate() const;
};

enum class DetectorMode { Slow, Fast };

struct DetectorModel {
  DetectorMode mode = DetectorMode::Slow;
};

enum class ImagingRoute { Direct, Factored };

/// Coupled: exact x_os integration, evaluated as a convergent series of
/// chirp-z transforms. Printed: e^{-x^2/a^2} times the transform of
/// sinc e^{i dk L/2} e^{-kappa^2/kappa_NA^2}.
enum class FactoredForm { Coupled, Printed };

struct ImagingOptions {
  QuadratureSpec quadrature{};  ///< target_rel_error and max_refinements drive the direct route
  QuadratureSpec slit_quadrature{QuadratureRule::GaussLegendreComposite, 2, 8, 1e-4, 8};
  double envelope_radii = 4.0;        ///< x_os truncation in units of a_p
  double kappa_aperture_radii = 6.0;  ///< kappa window >= this / a_p
  double kappa_sinc_zeros = 3.0;      ///< kappa window >= this many first sinc zeros
  double kappa_na_multiples = 3.0;    ///< kappa window >= this many kappa_NA (direct route)
  double factored_na_multiples = 8.0; ///< kappa window of the transform path
  double max_panel_phase = std::numbers::pi / 4;
  int gauss_points = 4;
  double sampling_scale = 1.0;  ///< multiplies every initial sample count
  ImagingRoute route = ImagingRoute::Factored;
  FactoredForm factored_form = FactoredForm::Coupled;
  bool include_fresnel = false;  ///< fully phase-matched image only
  bool raw = false;

  void validate() const;
};

struct AmplitudeResult {
  Eigen::ArrayXcd amplitude;
  double error_estimate = 0.0;  ///< L-infinity change of |A|^2 over the last refinement, relative to peak
  int refinements = 0;
};

/// Inner amplitude at idler position x1i by nested quadrature over x_os and
/// kappa. Throws ConvergenceError when refinement does not reach the target.
AmplitudeResult amplitude_direct(const ImagingGeometry& geom, const PhaseMatchConfig& cfg, Wavelength signal,
                                 double x1i, const Eigen::ArrayXd& grid, const ImagingOptions& opts = {});

/// Same amplitude from the x_os-integrated form, one kappa transform per
/// series term (or the printed form per opts.factored_form).
Eigen::ArrayXcd amplitude_factored(const ImagingGeometry& geom, const PhaseMatchConfig& cfg, Wavelength signal,
                                   double x1i, const Eigen::ArrayXd& grid, const ImagingOptions& opts = {});

/// Half-width of the kappa window used by the direct route.
double kappa_window(const ImagingGeometry& geom, const PhaseMatchConfig& cfg, Wavelength signal,
                    const ImagingOptions& opts = {});

/// lambda_s d_2 / (pi a_p^2).
double small_parameter(const ImagingGeometry& geom, Wavelength signal);

/// Point-detector PSF at the slit center by direct nested quadrature.
Profile psf_single_frequency(const ImagingGeometry& geom, const PhaseMatchConfig& cfg, Wavelength signal,
                             const Eigen::ArrayXd& grid, const ImagingOptions& opts = {});

/// Slit image: |inner amplitude|^2 integrated over x_1i across the slit.
Profile ccr_image(const ImagingGeometry& geom, const PhaseMatchConfig& cfg, Wavelength signal,
                  const Eigen::ArrayXd& grid, const ImagingOptions& opts = {});

/// Slit image with every spatial frequency phase matched: squared
/// Gaussian-aperture kernel integrated over the slit.
Profile ccr_fully_phasematched(const ImagingGeometry& geom, Wavelength signal, const Eigen::ArrayXd& grid,
                               const ImagingOptions& opts = {});

/// Band-combined PSF: Slow sums |A|^2 over the band, Fast squares the summed
/// amplitude. Samples are reduced in ascending frequency.
Profile psf_polychromatic(const ImagingGeometry& geom, const PhaseMatchConfig& cfg, const SpectralBand& band,
                          DetectorModel detector, const Eigen::ArrayXd& grid, const ImagingOptions& opts = {});

struct DetectorPair {
  Profile slow;
  Profile fast;
};

/// Both detector limits from one pass over the band.
DetectorPair psf_polychromatic_pair(const ImagingGeometry& geom, const PhaseMatchConfig& cfg, const SpectralBand& band,
                                    const Eigen::ArrayXd& grid, const ImagingOptions& opts = {});

/// Fourier-form PSF. Throws PreconditionError when small_parameter() >= 0.01.
Profile psf_factored(const ImagingGeometry& geom, const PhaseMatchConfig& cfg, Wavelength signal,
                     const Eigen::ArrayXd& grid, const ImagingOptions& opts = {});

/// PSF center from birefringent walk-off: -(1/n)(dn/dtheta) L/2 at the cut
/// angle and degenerate wavelength; zero for type I.
double walkoff_center(const PhaseMatchConfig& cfg);

}  // namespace ghostsim
