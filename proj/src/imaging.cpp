#include "ghostsim/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "ghostsim/errors.hpp"

namespace ghostsim {
namespace {

constexpr double kPi = std::numbers::pi;

struct Panels {
  double start = 0.0;
  double width = 0.0;
  Eigen::Index count = 0;
};

Panels make_panels(double lo, double hi, double rate, const ImagingOptions& o, int level, Eigen::Index floor) {
  const double base = std::ceil(rate * (hi - lo) / o.max_panel_phase * o.sampling_scale);
  Eigen::Index n = std::max<Eigen::Index>(floor, static_cast<Eigen::Index>(base));
  n <<= level;
  return Panels{lo, (hi - lo) / static_cast<double>(n), n};
}

// Node t(q, p) of Gauss point q in panel p.
Eigen::ArrayXXd panel_nodes(const Panels& pn, const GaussLegendre<double>& gl) {
  Eigen::ArrayXXd t(gl.nodes.size(), pn.count);
  for (Eigen::Index p = 0; p < pn.count; ++p) {
    const double mid = pn.start + (static_cast<double>(p) + 0.5) * pn.width;
    t.col(p) = mid + 0.5 * pn.width * gl.nodes;
  }
  return t;
}

// sum_{q,p} c(q, p) exp(-i t(q, p) s) for every s, Horner in the panel index.
Eigen::ArrayXcd panel_fourier_sum(const Panels& pn, const GaussLegendre<double>& gl, const Eigen::ArrayXXcd& c,
                                  const Eigen::ArrayXd& s) {
  constexpr Eigen::Index batch = 1024;
  const Eigen::Index nq = gl.nodes.size();
  Eigen::ArrayXcd out = Eigen::ArrayXcd::Zero(s.size());
  for (Eigen::Index b0 = 0; b0 < s.size(); b0 += batch) {
    const Eigen::Index nb = std::min(batch, s.size() - b0);
    const Eigen::ArrayXd sb = s.segment(b0, nb);
    Eigen::ArrayXcd z(nb);
    for (Eigen::Index j = 0; j < nb; ++j) z(j) = std::polar(1.0, -pn.width * sb(j));
    Eigen::ArrayXcd acc(nb);
    for (Eigen::Index q = 0; q < nq; ++q) {
      acc.setConstant(c(q, pn.count - 1));
      for (Eigen::Index p = pn.count - 2; p >= 0; --p) acc = acc * z + c(q, p);
      const double t0 = pn.start + 0.5 * pn.width * (1.0 + gl.nodes(q));
      for (Eigen::Index j = 0; j < nb; ++j) out(b0 + j) += acc(j) * std::polar(1.0, -t0 * sb(j));
    }
  }
  return out;
}

Complex phase_kernel(const MismatchModel& m, double kappa, double half_length) {
  const double arg = m(kappa) * half_length;
  return sinc(arg) * std::polar(1.0, arg);
}

double first_sinc_zero(const MismatchModel& m, double length) {
  const double level = 2.0 * kPi / length + std::abs(m.residual);
  if (m.linear != 0.0) return level / std::abs(m.linear);
  return std::sqrt(level / std::abs(m.quadratic));
}

bool is_uniform(const Eigen::ArrayXd& g) {
  if (g.size() < 2) return false;
  const double step = (g(g.size() - 1) - g(0)) / static_cast<double>(g.size() - 1);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (std::abs(g(i) - (g(0) + static_cast<double>(i) * step)) > 1e-9 * std::abs(step)) return false;
  }
  return true;
}

Eigen::ArrayXcd transform(const Eigen::ArrayXcd& spectrum, const UniformAxis& kappa, const Eigen::ArrayXd& x,
                          const ChirpZPlan* plan) {
  if (plan != nullptr) return plan->apply(spectrum);
  return fourier_direct(spectrum, kappa, x);
}

void require_grid(const Eigen::ArrayXd& grid) {
  if (grid.size() == 0) throw ArgumentError("profile grid is empty");
  if (!grid.isFinite().all()) throw ArgumentError("profile grid must be finite");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Eigen::ArrayXcd route_amplitude(const ImagingGeometry& geom, const PhaseMatchConfig& cfg, Wavelength signal,
                                double x1i, const Eigen::ArrayXd& grid, const ImagingOptions& opts) {
  if (opts.route == ImagingRoute::Direct) return amplitude_direct(geom, cfg, signal, x1i, grid, opts).amplitude;
  return amplitude_factored(geom, cfg, signal, x1i, grid, opts);
}

const char* route_name(const ImagingOptions& opts) {
  if (opts.route == ImagingRoute::Direct) return "direct";
  return opts.factored_form == FactoredForm::Coupled ? "factored" : "factored-printed";
}

}  // namespace

void ImagingGeometry::validate() const {
  if (!(pump_radius > 0.0)) throw DomainError("pump radius must be positive");
  if (!(distance > 0.0)) throw DomainError("propagation distance must be positive");
  if (!(slit_width >= 0.0)) throw DomainError("slit width must be non-negative");
  if (!std::isfinite(slit_center)) throw DomainError("slit center must be finite");
}

void ImagingOptions::validate() const {
  quadrature.validate();
  slit_quadrature.validate();
  if (!(envelope_radii >= 2.0)) throw ArgumentError("envelope_radii must be at least 2");
  if (!(kappa_aperture_radii > 0.0 && kappa_sinc_zeros > 0.0 && kappa_na_multiples > 0.0 &&
        factored_na_multiples > 0.0)) {
    throw ArgumentError("kappa window factors must be positive");
  }
  if (!(max_panel_phase > 0.0 && max_panel_phase <= kPi)) throw ArgumentError("max_panel_phase must lie in (0, pi]");
  if (gauss_points < 2 || gauss_points > 32) throw ArgumentError("gauss_points must lie in [2, 32]");
  if (!(sampling_scale > 0.0)) throw ArgumentError("sampling_scale must be positive");
}

double small_parameter(const ImagingGeometry& geom, Wavelength signal) {
  return signal.meters() * geom.distance / (kPi * geom.pump_radius * geom.pump_radius);
}

double kappa_window(const ImagingGeometry& geom, const PhaseMatchConfig& cfg, Wavelength signal,
                    const ImagingOptions& opts) {
  const MismatchModel m = mismatch_model(cfg, signal);
  const double kappa_na = 2.0 * kPi * geom.pump_radius / (signal.meters() * geom.distance);
  return std::max({opts.kappa_aperture_radii / geom.pump_radius,
                   opts.kappa_sinc_zeros * first_sinc_zero(m, cfg.crystal.length), opts.kappa_na_multiples * kappa_na});
}

AmplitudeResult amplitude_direct(const ImagingGeometry& geom, const PhaseMatchConfig& cfg, Wavelength signal,
                                 double x1i, const Eigen::ArrayXd& grid, const ImagingOptions& opts) {
  geom.validate();
  cfg.validate();
  opts.validate();
  require_grid(grid);
  const Wavelength idler = idler_wavelength(cfg.pump, signal);
  const MismatchModel m = mismatch_model(cfg, signal);
  const double a = geom.pump_radius;
  const double length = cfg.crystal.length;
  const double half_l = 0.5 * length;
  const double bs = signal.meters() * geom.distance / (2.0 * kPi);
  const double bi = idler.meters() * geom.distance / (2.0 * kPi);
  const double bi_eff = std::abs(bi + m.quadratic * length);
  const double x_lim = opts.envelope_radii * a;
  const double k_lim = kappa_window(geom, cfg, signal, opts);
  const double x_max = grid.abs().maxCoeff();
  const double shift = std::abs(m.linear) * half_l;

  const double rate_out = std::abs(1.0 / bs - 1.0 / bi_eff) * x_lim + x_max / bs + (std::abs(x1i) + shift) / bi_eff +
                          2.0 * x_lim / (a * a);
  const double rate_in = x_lim + std::abs(x1i) + bi_eff * k_lim + shift;

  const GaussLegendre<double> gl(opts.gauss_points);
  const Eigen::ArrayXd s_out = grid / bs;

  AmplitudeResult result;
  Eigen::ArrayXd previous;
  for (int level = 0; level <= opts.quadrature.max_refinements; ++level) {
    const Panels pin = make_panels(-k_lim, k_lim, rate_in, opts, level, 16);
    const Panels pout = make_panels(-x_lim, x_lim, rate_out, opts, level, 64);

    const Eigen::ArrayXXd kappa = panel_nodes(pin, gl);
    Eigen::ArrayXXcd c_in(kappa.rows(), kappa.cols());
    for (Eigen::Index p = 0; p < kappa.cols(); ++p) {
      for (Eigen::Index q = 0; q < kappa.rows(); ++q) {
        const double k = kappa(q, p);
        c_in(q, p) = 0.5 * pin.width * gl.weights(q) * phase_kernel(m, k, half_l) * std::polar(1.0, 0.5 * bi * k * k);
      }
    }

    const Eigen::ArrayXXd xos = panel_nodes(pout, gl);
    const Eigen::ArrayXd y = Eigen::Map<const Eigen::ArrayXd>(xos.data(), xos.size()) + x1i;
    const Eigen::ArrayXcd g = panel_fourier_sum(pin, gl, c_in, y);

    Eigen::ArrayXXcd c_out(xos.rows(), xos.cols());
    for (Eigen::Index p = 0; p < xos.cols(); ++p) {
      for (Eigen::Index q = 0; q < xos.rows(); ++q) {
        const double x = xos(q, p);
        c_out(q, p) = 0.5 * pout.width * gl.weights(q) * std::exp(-x * x / (a * a)) *
                      std::polar(1.0, 0.5 * x * x / bs) * g(q + p * xos.rows());
      }
    }
    Eigen::ArrayXcd amp = panel_fourier_sum(pout, gl, c_out, s_out);
    Eigen::ArrayXd intensity = amp.abs2();

    result.amplitude = std::move(amp);
    result.refinements = level;
    if (level > 0) {
      const double peak = intensity.maxCoeff();
      result.error_estimate = peak > 0.0 ? (intensity - previous).abs().maxCoeff() / peak : 0.0;
      if (result.error_estimate <= opts.quadrature.target_rel_error) return result;
    }
    previous = std::move(intensity);
  }
  Eigen::Index ipk = 0;
  result.amplitude.abs2().maxCoeff(&ipk);
  char buf[160];
  std::snprintf(buf, sizeof buf, "direct quadrature did not reach %.3g after %d refinements (estimate %.3g)",
                opts.quadrature.target_rel_error, opts.quadrature.max_refinements, result.error_estimate);
  throw ConvergenceError(buf, result.amplitude(ipk), result.error_estimate);
}

Eigen::ArrayXcd amplitude_factored(const ImagingGeometry& geom, const PhaseMatchConfig& cfg, Wavelength signal,
                                   double x1i, const Eigen::ArrayXd& grid, const ImagingOptions& opts) {
  geom.validate();
  cfg.validate();
  opts.validate();
  require_grid(grid);
  const Wavelength idler = idler_wavelength(cfg.pump, signal);
  const MismatchModel m = mismatch_model(cfg, signal);
  const bool coupled = opts.factored_form == FactoredForm::Coupled;
  const double a = geom.pump_radius;
  const double length = cfg.crystal.length;
  const double half_l = 0.5 * length;
  const double bs = signal.meters() * geom.distance / (2.0 * kPi);
  const double bi = idler.meters() * geom.distance / (2.0 * kPi);
  const double eps = small_parameter(geom, signal);
  const double kappa_na = 2.0 * kPi * a / (signal.meters() * geom.distance);
  const double squeeze = 1.0 + eps * eps;

  const double k_lim =
      std::max(kappa_window(geom, cfg, signal, opts), opts.factored_na_multiples * kappa_na * std::sqrt(squeeze));
  const Eigen::ArrayXd u = coupled ? Eigen::ArrayXd(grid / squeeze) : grid;
  const double chirp = coupled ? std::abs(bi + m.quadratic * length - bs / squeeze) : std::abs(m.quadratic * length);
  const double extent = u.abs().maxCoeff() + std::abs(x1i) + std::abs(m.linear) * half_l + chirp * k_lim +
                        8.0 / kappa_na;
  const double period = 8.0 * extent;
  const auto n = static_cast<Eigen::Index>(std::ceil(2.0 * k_lim * period / (2.0 * kPi) * opts.sampling_scale)) | 1;
  const UniformAxis kappa{-k_lim, 2.0 * k_lim / static_cast<double>(n - 1), n};

  std::unique_ptr<ChirpZPlan> plan;
  if (is_uniform(u)) {
    const UniformAxis ux{u(0), (u(u.size() - 1) - u(0)) / static_cast<double>(u.size() - 1), u.size()};
    plan = std::make_unique<ChirpZPlan>(kappa, ux);
  }

  Eigen::ArrayXcd spectrum(n);
  if (!coupled) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double k = kappa.at(j);
      const double t = k / kappa_na;
      spectrum(j) = phase_kernel(m, k, half_l) * std::exp(-t * t) * std::polar(1.0, -k * x1i);
    }
    return (-grid.square() / (a * a)).exp() * transform(spectrum, kappa, u, plan.get());
  }

  // A(x) = sqrt(pi/alpha) e^{-p x^2} sum_n (-2u/a)^n / n! F[(k/k_NA)^n Q e^{-p bs^2 k^2}](u)
  const Complex pb2 = 0.5 * bs * Complex(eps, 1.0) / squeeze;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double k = kappa.at(j);
    spectrum(j) = phase_kernel(m, k, half_l) * std::polar(1.0, 0.5 * bi * k * k - k * x1i) * std::exp(-pb2 * k * k);
  }
  const Eigen::ArrayXd ratio = kappa.nodes() / kappa_na;
  const Eigen::ArrayXd step = -2.0 * u / a;
  Eigen::ArrayXd coef = Eigen::ArrayXd::Ones(u.size());
  Eigen::ArrayXcd sum = transform(spectrum, kappa, u, plan.get());
  int quiet = 0;
  for (int order = 1; order <= 400; ++order) {
    spectrum *= ratio;
    coef *= step / static_cast<double>(order);
    const Eigen::ArrayXcd term = coef * transform(spectrum, kappa, u, plan.get());
    sum += term;
    const double scale = sum.abs().maxCoeff();
    quiet = term.abs().maxCoeff() <= 1e-16 * scale ? quiet + 1 : 0;
    if (quiet >= 2) {
      const Complex alpha(1.0 / (a * a), -0.5 / bs);
      const Complex p = Complex(eps, 1.0) / (2.0 * bs * squeeze);
      const Complex pre = std::sqrt(kPi / alpha);
      Eigen::ArrayXcd out(grid.size());
      for (Eigen::Index i = 0; i < grid.size(); ++i) out(i) = pre * std::exp(-p * grid(i) * grid(i)) * sum(i);
      return out;
    }
  }
  throw ConvergenceError("factored series did not converge within 400 terms", sum(0), sum.abs().maxCoeff());
}

Profile psf_single_frequency(const ImagingGeometry& geom, const PhaseMatchConfig& cfg, Wavelength signal,
                             const Eigen::ArrayXd& grid, const ImagingOptions& opts) {
  const AmplitudeResult r = amplitude_direct(geom, cfg, signal, geom.slit_center, grid, opts);
  Profile p = make_profile(grid, r.amplitude.abs2(), ProfileAxis::Position, "single frequency", opts.raw);
  p.add_metadata("signal_m", fmt(signal.meters()));
  p.add_metadata("route", "direct");
  p.add_metadata("quadrature_error", fmt(r.error_estimate));
  return p;
}

Profile ccr_image(const ImagingGeometry& geom, const PhaseMatchConfig& cfg, Wavelength signal,
                  const Eigen::ArrayXd& grid, const ImagingOptions& opts) {
  geom.validate();
  Eigen::ArrayXd values;
  if (geom.slit_width == 0.0) {
    values = route_amplitude(geom, cfg, signal, geom.slit_center, grid, opts).abs2();
  } else {
    auto integrand = [&](double x1i) -> Eigen::ArrayXd {
      return route_amplitude(geom, cfg, signal, x1i, grid, opts).abs2();
    };
    const double half = 0.5 * geom.slit_width;
    values = integrate_1d(integrand, opts.slit_quadrature, geom.slit_center - half, geom.slit_center + half).value;
    values = values.max(0.0);
  }
  Profile p = make_profile(grid, std::move(values), ProfileAxis::Position, "image", opts.raw);
  p.add_metadata("signal_m", fmt(signal.meters()));
  p.add_metadata("route", route_name(opts));
  return p;
}

Profile ccr_fully_phasematched(const ImagingGeometry& geom, Wavelength signal, const Eigen::ArrayXd& grid,
                               const ImagingOptions& opts) {
  geom.validate();
  require_grid(grid);
  const double a = geom.pump_radius;
  const double bs = signal.meters() * geom.distance / (2.0 * kPi);
  const Complex alpha(1.0 / (a * a), opts.include_fresnel ? -0.5 / bs : 0.0);
  // |sqrt(pi/alpha) exp(-beta^2 / 4 alpha)|^2 with beta = (x2s + x1i) / bs
  const double scale = kPi / std::abs(alpha);
  const double c = (1.0 / alpha).real() / (2.0 * bs * bs);
  const double rc = std::sqrt(c);
  const double half = 0.5 * geom.slit_width;
  Eigen::ArrayXd values(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double x = grid(i) + geom.slit_center;
    if (geom.slit_width == 0.0) {
      values(i) = scale * std::exp(-c * x * x);
      continue;
    }
    const double lo = rc * (x - half);
    const double hi = rc * (x + half);
    double diff;
    if (lo > 0.0) {
      diff = std::erfc(lo) - std::erfc(hi);
    } else if (hi < 0.0) {
      diff = std::erfc(-hi) - std::erfc(-lo);
    } else {
      diff = std::erf(hi) - std::erf(lo);
    }
    values(i) = scale * 0.5 * std::sqrt(kPi) / rc * diff;
  }
  Profile p = make_profile(grid, std::move(values), ProfileAxis::Position, "fully phase matched", opts.raw);
  p.add_metadata("signal_m", fmt(signal.meters()));
  p.add_metadata("include_fresnel", opts.include_fresnel ? "true" : "false");
  return p;
}

DetectorPair psf_polychromatic_pair(const ImagingGeometry& geom, const PhaseMatchConfig& cfg, const SpectralBand& band,
                                    const Eigen::ArrayXd& grid, const ImagingOptions& opts) {
  const std::vector<BandSample> samples = sample_band(band, cfg.pump);
  Eigen::ArrayXd slow = Eigen::ArrayXd::Zero(grid.size());
  Eigen::ArrayXcd fast = Eigen::ArrayXcd::Zero(grid.size());
  for (const BandSample& s : samples) {
    const Eigen::ArrayXcd amp = route_amplitude(geom, cfg, s.signal, geom.slit_center, grid, opts);
    slow += s.weight * amp.abs2();
    fast += s.amplitude_weight * amp;
  }
  DetectorPair out{make_profile(grid, std::move(slow), ProfileAxis::Position, "slow detector", opts.raw),
                   make_profile(grid, fast.abs2(), ProfileAxis::Position, "fast detector", opts.raw)};
  for (Profile* p : {&out.slow, &out.fast}) {
    p->add_metadata("detector", p == &out.slow ? "slow" : "fast");
    p->add_metadata("band_samples", std::to_string(samples.size()));
    p->add_metadata("route", route_name(opts));
  }
  return out;
}

Profile psf_polychromatic(const ImagingGeometry& geom, const PhaseMatchConfig& cfg, const SpectralBand& band,
                          DetectorModel detector, const Eigen::ArrayXd& grid, const ImagingOptions& opts) {
  DetectorPair pair = psf_polychromatic_pair(geom, cfg, band, grid, opts);
  return detector.mode == DetectorMode::Slow ? std::move(pair.slow) : std::move(pair.fast);
}

Profile psf_factored(const ImagingGeometry& geom, const PhaseMatchConfig& cfg, Wavelength signal,
                     const Eigen::ArrayXd& grid, const ImagingOptions& opts) {
  geom.validate();
  const double ratio = small_parameter(geom, signal);
  if (!(ratio < 0.01)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "factored form needs lambda d / (pi a^2) < 0.01, got %.4g", ratio);
    throw PreconditionError(buf);
  }
  const Eigen::ArrayXcd amp = amplitude_factored(geom, cfg, signal, geom.slit_center, grid, opts);
  Profile p = make_profile(grid, amp.abs2(), ProfileAxis::Position, "factored", opts.raw);
  p.add_metadata("signal_m", fmt(signal.meters()));
  p.add_metadata("route", route_name(opts));
  p.add_metadata("small_parameter", fmt(ratio));
  return p;
}

double walkoff_center(const PhaseMatchConfig& cfg) {
  if (cfg.type == InteractionType::TypeI) return 0.0;
  cfg.crystal.validate();
  const Wavelength deg = cfg.degenerate();
  const double theta = cfg.crystal.cut_angle;
  return -dn_e_dtheta(cfg.crystal, deg, theta) / n_e_at_angle(cfg.crystal, deg, theta) * 0.5 * cfg.crystal.length;
}

}  // namespace ghostsim
