#include "ghostsim/phasematch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ghostsim/errors.hpp"

namespace ghostsim {

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

namespace {

double pump_k(const CrystalSpec& c, Wavelength pump) {
  return wavevector(pump, n_e_at_angle(c, pump, c.cut_angle));
}

double degenerate_mismatch(const CrystalSpec& crystal, Wavelength pump, InteractionType type, double theta) {
  const Wavelength deg(2.0 * pump.meters());
  const double kp = wavevector(pump, n_e_at_angle(crystal, pump, theta));
  const double ko = wavevector(deg, n_o(crystal, deg));
  if (type == InteractionType::TypeI) return kp - 2.0 * ko;
  return kp - wavevector(deg, n_e_at_angle(crystal, deg, theta)) - ko;
}

void require_type(const PhaseMatchConfig& cfg, InteractionType type) {
  if (cfg.type != type) {
    throw PreconditionError(type == InteractionType::TypeI ? "operation requires a type I configuration"
                                                           : "operation requires a type II configuration");
  }
}

void require_paraxial(double kappa, const MismatchModel& m) {
  const double bound = 0.5 * std::min(m.signal_k, m.idler_k);
  if (!(std::abs(kappa) < bound)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "transverse wavevector %.6g rad/m outside the paraxial bound %.6g rad/m", kappa,
                  bound);
    throw PreconditionError(buf);
  }
}

// Signal wavevector for transverse components (kx, ky): extraordinary index
// iterated to self-consistency with the propagation direction.
double signal_kz(const PhaseMatchConfig& cfg, Wavelength signal, double kx, double ky) {
  const double k0 = signal.vacuum_wavenumber();
  const double kt2 = kx * kx + ky * ky;
  if (cfg.type == InteractionType::TypeI) {
    const double k = k0 * n_o(cfg.crystal, signal);
    return std::sqrt(k * k - kt2);
  }
  const double st = std::sin(cfg.crystal.cut_angle);
  const double ct = std::cos(cfg.crystal.cut_angle);
  double n = n_e_at_angle(cfg.crystal, signal, cfg.crystal.cut_angle);
  double kz = 0.0;
  for (int iter = 0; iter < 60; ++iter) {
    const double k = k0 * n;
    kz = std::sqrt(k * k - kt2);
    const double c = std::clamp((-kx * st + kz * ct) / k, -1.0, 1.0);
    const double next = n_e_at_angle(cfg.crystal, signal, std::acos(c));
    if (next == n) break;
    n = next;
  }
  const double k = k0 * n;
  return std::sqrt(k * k - kt2);
}

double cone_intensity(const PhaseMatchConfig& cfg, Wavelength signal, Wavelength idler, double kp, double kx,
                      double ky) {
  const double ki = idler.vacuum_wavenumber() * n_o(cfg.crystal, idler);
  const double kiz = std::sqrt(ki * ki - kx * kx - ky * ky);
  const double dk = kp - signal_kz(cfg, signal, kx, ky) - kiz;
  const double s = sinc(0.5 * dk * cfg.crystal.length);
  return s * s;
}

void require_window(const GridSpec& g, const char* name) {
  g.validate();
  if (g.min > -0.01 || g.max < 0.01) {
    throw ArgumentError(std::string(name) + " angle grid must span at least +-10 mrad");
  }
}

}  // namespace

void PhaseMatchConfig::validate() const {
  crystal.validate();
  if (!crystal.in_band(pump) || !crystal.in_band(degenerate())) {
    throw DomainError("pump or degenerate wavelength outside the crystal validity band");
  }
}

double solve_cut_angle(const CrystalSpec& crystal, Wavelength pump, InteractionType type) {
  if (!crystal.in_band(pump) || !crystal.in_band(Wavelength(2.0 * pump.meters()))) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "pump %.6g nm or degenerate %.6g nm outside %s validity band %.6g-%.6g nm",
                  pump.nanometers(), 2.0 * pump.nanometers(), crystal.material.c_str(), crystal.valid_min * 1e9,
                  crystal.valid_max * 1e9);
    throw DomainError(buf);
  }
  auto f = [&](double theta) { return degenerate_mismatch(crystal, pump, type, theta); };
  const int scan = 512;
  const double top = std::numbers::pi / 2;
  double prev_theta = 0.0;
  double prev = f(0.0);
  for (int i = 1; i <= scan; ++i) {
    const double theta = top * i / scan;
    const double cur = f(theta);
    if ((prev > 0) != (cur > 0) || cur == 0.0) return bisect(f, prev_theta, theta);
    prev_theta = theta;
    prev = cur;
  }
  throw UnsolvableGeometryError("no cut angle in (0, pi/2) phase matches the degenerate interaction");
}

PhaseMatchConfig with_solved_cut_angle(PhaseMatchConfig cfg) {
  cfg.crystal.cut_angle = solve_cut_angle(cfg.crystal, cfg.pump, cfg.type);
  return cfg;
}

double signal_index(const PhaseMatchConfig& cfg, Wavelength signal) {
  return cfg.type == InteractionType::TypeII ? n_e_at_angle(cfg.crystal, signal, cfg.crystal.cut_angle)
                                             : n_o(cfg.crystal, signal);
}

double collinear_mismatch(const PhaseMatchConfig& cfg, Wavelength signal) {
  const Wavelength idler = idler_wavelength(cfg.pump, signal);
  return pump_k(cfg.crystal, cfg.pump) - wavevector(signal, signal_index(cfg, signal)) -
         wavevector(idler, n_o(cfg.crystal, idler));
}

MismatchModel mismatch_model(const PhaseMatchConfig& cfg, Wavelength signal) {
  const Wavelength idler = idler_wavelength(cfg.pump, signal);
  MismatchModel m;
  const double ns = signal_index(cfg, signal);
  m.signal_k = wavevector(signal, ns);
  m.idler_k = wavevector(idler, n_o(cfg.crystal, idler));
  m.residual = pump_k(cfg.crystal, cfg.pump) - m.signal_k - m.idler_k;
  const double quad = 0.5 / m.signal_k + 0.5 / m.idler_k;
  if (cfg.type == InteractionType::TypeI) {
    m.quadratic = quad;
  } else {
    m.linear = -dn_e_dtheta(cfg.crystal, signal, cfg.crystal.cut_angle) / ns;
    m.quadratic = cfg.approximation == Approximation::Full ? quad : 0.0;
  }
  return m;
}

double delta_kz_type1_degenerate(const PhaseMatchConfig& cfg, TransverseK kappa) {
  require_type(cfg, InteractionType::TypeI);
  const Wavelength deg = cfg.degenerate();
  const double k = wavevector(deg, n_o(cfg.crystal, deg));
  MismatchModel m;
  m.signal_k = m.idler_k = k;
  require_paraxial(kappa.value(), m);
  return kappa.value() * kappa.value() / k;
}

double delta_kz_type1_nondegenerate(const PhaseMatchConfig& cfg, TransverseK kappa_s, Wavelength signal) {
  require_type(cfg, InteractionType::TypeI);
  const MismatchModel m = mismatch_model(cfg, signal);
  require_paraxial(kappa_s.value(), m);
  return m(kappa_s.value());
}

double delta_kz_type2(const PhaseMatchConfig& cfg, TransverseK kappa_s, Wavelength signal) {
  require_type(cfg, InteractionType::TypeII);
  const MismatchModel m = mismatch_model(cfg, signal);
  require_paraxial(kappa_s.value(), m);
  return m(kappa_s.value());
}

double theta_max_type1(const PhaseMatchConfig& cfg, Wavelength lambda) {
  if (!(cfg.crystal.length > 0.0)) throw DomainError("crystal length must be positive");
  return std::sqrt(lambda.meters() / (n_o(cfg.crystal, lambda) * cfg.crystal.length));
}

double theta_max_type2(const PhaseMatchConfig& cfg, Wavelength lambda) {
  cfg.crystal.validate();
  const double d = std::abs(dn_e_dtheta(cfg.crystal, lambda, cfg.crystal.cut_angle));
  if (!(d > 0.0)) throw DomainError("index derivative vanishes at the cut angle");
  return lambda.meters() / (cfg.crystal.length * d);
}

Profile phasematch_curve(const PhaseMatchConfig& cfg, Wavelength signal, const Eigen::ArrayXd& exterior_angles) {
  const Eigen::Index n = exterior_angles.size();
  if (n == 0) throw ArgumentError("phase-matching curve needs a non-empty angle grid");
  if (n < 256) throw ArgumentError("phase-matching curve needs at least 256 grid points");
  const double tol = 1e-12 * exterior_angles.abs().maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(exterior_angles(i) + exterior_angles(n - 1 - i)) > tol) {
      throw ArgumentError("phase-matching curve grid must be symmetric about zero");
    }
  }
  cfg.crystal.validate();
  PhaseMatchConfig full = cfg;
  full.approximation = Approximation::Full;
  const MismatchModel m = mismatch_model(full, signal);
  const double k0 = signal.vacuum_wavenumber();
  const double half_l = 0.5 * cfg.crystal.length;
  Eigen::ArrayXd values(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = sinc(m(k0 * exterior_angles(i)) * half_l);
    values(i) = s * s;
  }
  char label[64];
  std::snprintf(label, sizeof label, "%.6g nm", signal.nanometers());
  Profile p = make_profile(exterior_angles, std::move(values), ProfileAxis::ExteriorAngle, label, true);
  p.add_metadata("signal_nm", label);
  return p;
}

AngleMap far_field_slice(const PhaseMatchConfig& cfg, Wavelength signal, const GridSpec& x, const GridSpec& y) {
  cfg.validate();
  x.validate();
  y.validate();
  const Wavelength idler = idler_wavelength(cfg.pump, signal);
  const double kp = pump_k(cfg.crystal, cfg.pump);
  const double ks0 = signal.vacuum_wavenumber();
  const double ki0 = idler.vacuum_wavenumber();
  AngleMap map;
  map.angle_x = x.nodes();
  map.angle_y = y.nodes();
  map.intensity.resize(map.angle_x.size(), map.angle_y.size());
  for (Eigen::Index i = 0; i < map.angle_x.size(); ++i) {
    const double sx = std::sin(map.angle_x(i));
    for (Eigen::Index j = 0; j < map.angle_y.size(); ++j) {
      const double sy = std::sin(map.angle_y(j));
      const double e_cone = cone_intensity(cfg, signal, idler, kp, ks0 * sx, ks0 * sy);
      const double o_cone = cone_intensity(cfg, signal, idler, kp, -ki0 * sx, -ki0 * sy);
      map.intensity(i, j) = 0.5 * (e_cone + o_cone);
    }
  }
  return map;
}

AngleMap far_field_map(const PhaseMatchConfig& cfg, const SpectralBand& band, const GridSpec& x, const GridSpec& y) {
  require_window(x, "x");
  require_window(y, "y");
  AngleMap total;
  bool first = true;
  for (const BandSample& s : sample_band(band, cfg.pump)) {
    AngleMap slice = far_field_slice(cfg, s.signal, x, y);
    if (first) {
      total = std::move(slice);
      total.intensity *= s.weight;
      first = false;
    } else {
      total.intensity += s.weight * slice.intensity;
    }
  }
  const double peak = total.intensity.maxCoeff();
  if (peak > 0.0) total.intensity /= peak;
  return total;
}

}  // namespace ghostsim
