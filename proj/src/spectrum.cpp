#include "ghostsim/spectrum.hpp"

#include <cmath>

#include "ghostsim/errors.hpp"

namespace ghostsim {

void SpectralBand::validate() const {
  if (!(center.meters() > 0.0)) throw ArgumentError("band center must be positive");
  if (!(width > 0.0) || !(width < center.meters())) throw ArgumentError("band width must lie in (0, center)");
  if (samples < 1 || samples % 2 == 0) throw ArgumentError("band sample count must be odd");
}

Wavelength idler_wavelength(Wavelength pump, Wavelength signal) {
  if (!(signal.meters() > pump.meters())) {
    throw DomainError("energy conservation: signal wavelength must exceed the pump wavelength");
  }
  return Wavelength(1.0 / (1.0 / pump.meters() - 1.0 / signal.meters()));
}

std::vector<BandSample> sample_band(const SpectralBand& band, Wavelength pump) {
  band.validate();
  const double two_pi_c = 2.0 * std::numbers::pi * speed_of_light;
  const double omega_c = two_pi_c / band.center.meters();
  const double half = 0.5 * band.width;
  const double full = two_pi_c / (band.center.meters() - half) - two_pi_c / (band.center.meters() + half);
  const double span = band.shape == BandShape::TopHat ? full : 3.0 * full;

  std::vector<BandSample> out;
  out.reserve(static_cast<std::size_t>(band.samples));
  const int n = band.samples;
  const double step = n > 1 ? span / (n - 1) : 0.0;
  for (int j = 0; j < n; ++j) {
    const int offset = j - n / 2;
    BandSample s;
    s.omega = omega_c + offset * step;
    s.signal = offset == 0 ? band.center : Wavelength(two_pi_c / s.omega);
    s.idler = idler_wavelength(pump, s.signal);
    double w = n > 1 ? step : 1.0;
    if (n > 1 && (j == 0 || j == n - 1)) w *= 0.5;
    double transmission = 1.0;
    if (band.shape == BandShape::Gaussian) {
      const double r = (s.omega - omega_c) / full;
      transmission = std::exp(-4.0 * std::log(2.0) * r * r);
    }
    s.weight = w * transmission;
    s.amplitude_weight = w * std::sqrt(transmission);
    out.push_back(s);
  }
  return out;
}

}  // namespace ghostsim
