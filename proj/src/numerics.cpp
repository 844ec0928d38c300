#include "ghostsim/numerics.hpp"

#include <unsupported/Eigen/FFT>

#include <cstdio>

namespace ghostsim {
namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// exp(i s w m^2 / 2) with the phase reduced in extended precision.
Complex quadratic_phase(long double w, long double m, int sign) {
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  long double phase = std::fmod(0.5L * w * m * m, two_pi);
  return std::polar(1.0, static_cast<double>(sign * phase));
}

void require_uniform(const UniformAxis& axis, const char* name) {
  if (axis.size < 1) throw ArgumentError(std::string(name) + " axis is empty");
  if (axis.size > 1 && !(axis.step > 0.0)) {
    throw ArgumentError(std::string(name) + " axis step must be positive");
  }
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(target_rel_error > 0.0)) throw ArgumentError("target_rel_error must be positive");
  if (panels < 1) throw ArgumentError("panel count must be at least 1");
  if (points_per_panel < 1 || points_per_panel > 64) throw ArgumentError("points_per_panel must lie in [1, 64]");
  if (rule == QuadratureRule::Trapezoid && points_per_panel < 2) {
    throw ArgumentError("trapezoid rule needs at least 2 points per panel");
  }
  if (max_refinements < 1 || max_refinements > 24) throw ArgumentError("max_refinements must lie in [1, 24]");
}

Eigen::ArrayXd UniformAxis::nodes() const {
  Eigen::ArrayXd out(size);
  for (Eigen::Index i = 0; i < size; ++i) out(i) = at(i);
  return out;
}

void GridSpec::validate() const {
  if (!(min < max)) throw ArgumentError("grid requires min < max");
  if (points < 16) throw ArgumentError("grid requires at least 16 points");
}

UniformAxis GridSpec::axis() const {
  validate();
  return UniformAxis{min, step(), points};
}

Eigen::ArrayXd GridSpec::nodes() const {
  validate();
  // Endpoint-weighted form keeps symmetric grids exactly symmetric.
  const double n = static_cast<double>(points - 1);
  Eigen::ArrayXd out(points);
  for (Eigen::Index i = 0; i < points; ++i) {
    const double t = static_cast<double>(i);
    out(i) = ((n - t) * min + t * max) / n;
  }
  return out;
}

Eigen::ArrayXcd fourier_direct(const Eigen::Ref<const Eigen::ArrayXcd>& samples, const UniformAxis& kappa,
                               const Eigen::Ref<const Eigen::ArrayXd>& x) {
  require_uniform(kappa, "kappa");
  if (samples.size() != kappa.size) throw ArgumentError("sample count does not match kappa axis");
  Eigen::ArrayXcd out(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Complex acc = 0.0;
    for (Eigen::Index j = 0; j < samples.size(); ++j) {
      acc += samples(j) * std::polar(1.0, -kappa.at(j) * x(k));
    }
    out(k) = acc * kappa.step;
  }
  return out;
}

ChirpZPlan::ChirpZPlan(const UniformAxis& kappa, const UniformAxis& x) : kappa_(kappa), x_(x) {
  require_uniform(kappa, "kappa");
  require_uniform(x, "x");
  const auto n = static_cast<std::size_t>(kappa.size);
  const auto m = static_cast<std::size_t>(x.size);
  fft_size_ = next_pow2(n + m - 1);
  const long double w = static_cast<long double>(kappa.step) * static_cast<long double>(x.step);

  input_chirp_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const long double shift = static_cast<long double>(j) * kappa.step * x.start;
    input_chirp_[j] = std::polar(1.0, -static_cast<double>(std::fmod(shift, 2.0L * std::numbers::pi_v<long double>))) *
                      quadratic_phase(w, static_cast<long double>(j), -1);
  }
  output_chirp_.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    output_chirp_[k] = kappa.step * std::polar(1.0, -kappa.start * x.at(static_cast<Eigen::Index>(k))) *
                       quadratic_phase(w, static_cast<long double>(k), -1);
  }

  std::vector<Complex> kernel(fft_size_, Complex(0.0));
  for (std::size_t k = 0; k < m; ++k) kernel[k] = quadratic_phase(w, static_cast<long double>(k), +1);
  for (std::size_t j = 1; j < n; ++j) kernel[fft_size_ - j] = quadratic_phase(w, static_cast<long double>(j), +1);
  Eigen::FFT<double> fft;
  fft.fwd(kernel_fft_, kernel);
}

Eigen::ArrayXcd ChirpZPlan::apply(const Eigen::Ref<const Eigen::ArrayXcd>& samples) const {
  if (samples.size() != kappa_.size) throw ArgumentError("sample count does not match the plan's kappa axis");
  std::vector<Complex> buffer(fft_size_, Complex(0.0));
  for (std::size_t j = 0; j < input_chirp_.size(); ++j) buffer[j] = samples(static_cast<Eigen::Index>(j)) * input_chirp_[j];
  Eigen::FFT<double> fft;
  std::vector<Complex> spectrum;
  fft.fwd(spectrum, buffer);
  for (std::size_t i = 0; i < fft_size_; ++i) spectrum[i] *= kernel_fft_[i];
  fft.inv(buffer, spectrum);
  Eigen::ArrayXcd out(x_.size);
  for (std::size_t k = 0; k < output_chirp_.size(); ++k) out(static_cast<Eigen::Index>(k)) = buffer[k] * output_chirp_[k];
  return out;
}

Eigen::ArrayXcd fourier_profile(const Eigen::Ref<const Eigen::ArrayXcd>& samples, const UniformAxis& kappa,
                                const UniformAxis& x) {
  require_uniform(kappa, "kappa");
  require_uniform(x, "x");
  const double span = x.back() - x.start;
  const double period = 2.0 * std::numbers::pi / kappa.step;
  if (span >= period) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "target span %.6g exceeds the transform period %.6g; kappa spacing must be below %.6g",
                  span, period, 2.0 * std::numbers::pi / span);
    throw AliasingError(buf, 2.0 * std::numbers::pi / span);
  }
  return ChirpZPlan(kappa, x).apply(samples);
}

}  // namespace ghostsim
