#pragma once

// Filter passband and its energy-conserving signal/idler sampling.

#include <vector>

#include "ghostsim/dispersion.hpp"

namespace ghostsim {

inline constexpr double speed_of_light = 299792458.0;

enum class BandShape { TopHat, Gaussian };

struct SpectralBand {
  Wavelength center = nanometers(810.0);
  double width = 10e-9;  ///< meters; full width (top hat) or FWHM (Gaussian)
  BandShape shape = BandShape::TopHat;
  int samples = 41;

  /// Throws ArgumentError unless width > 0 and samples is odd and >= 1.
  void validate() const;
};

struct BandSample {
  double omega = 0.0;  ///< signal angular frequency, rad/s
  Wavelength signal{0.0};
  Wavelength idler{0.0};
  double weight = 0.0;            ///< quadrature weight times spectral transmission
  double amplitude_weight = 0.0;  ///< quadrature weight times sqrt(transmission)
};

/// Idler wavelength fixed by 1/lambda_i = 1/lambda_p - 1/lambda_s. Throws
/// DomainError when the signal is not longer than the pump.
Wavelength idler_wavelength(Wavelength pump, Wavelength signal);

/// Samples uniform in signal angular frequency, ascending, centered on the
/// band center. Top hat spans the full width; Gaussian spans +-1.5 FWHM.
std::vector<BandSample> sample_band(const SpectralBand& band, Wavelength pump);

}  // namespace ghostsim
