// Acceptance checks for criteria 1-10. Prints one PASS/FAIL line per
// criterion and exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ghostsim/app/scenario.hpp"
#include "ghostsim/errors.hpp"
#include "ghostsim/imaging.hpp"

using namespace ghostsim;
using namespace ghostsim::app;
namespace fs = std::filesystem;

namespace tol {
constexpr double identity_rel = 1e-9;
constexpr double astig_factor = 3.0;
constexpr double measured_width = 3.7e-3;
constexpr double width_factor = 2.0;
constexpr double factored_linf = 1e-2;
constexpr double walkoff_rel = 0.05;
constexpr double fig14a_rel = 0.10;
constexpr double fig14b_fast_over_slow = 0.7;
constexpr double fig14b_slow_rel = 0.15;
constexpr double fig15_rel = 0.05;
constexpr double slit_rel = 0.05;
constexpr double blur_edge_fraction = 0.25;
constexpr double derivative_rel = 1e-6;
constexpr double fourier_rel = 1e-10;
constexpr double refinement_rel = 0.01;
}  // namespace tol

namespace limit {
constexpr double c1 = 1.0;
constexpr double c2 = 1.0;
constexpr double c3 = 120.0;
constexpr double c4 = 60.0;
constexpr double c5 = 600.0;
constexpr double c6 = 10.0;
constexpr double c7 = 60.0;
}  // namespace limit

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [fail]");
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

int failures = 0;

void report(int n, const std::function<Outcome()>& body, double runtime_limit = 0.0) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double t = std::chrono::duration<double>(Clock::now() - t0).count();
  if (runtime_limit > 0.0) o.require(t < runtime_limit, fmt("runtime %.2f s < %.0f s", t, runtime_limit));
  if (!o.pass) ++failures;
  std::printf("criterion %d: %s  %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
  std::fflush(stdout);
}

PhaseMatchConfig solved(double length, Wavelength pump, InteractionType type) {
  PhaseMatchConfig c;
  c.crystal = bbo(length);
  c.pump = pump;
  c.type = type;
  return with_solved_cut_angle(c);
}

// First interior angle of the given sign where |dk| reaches 2 pi / L, by
// uniform scan and bisection.
double scan_acceptance(const std::function<double(double)>& dk, double length, double sign, double hi) {
  const double target = 2 * std::numbers::pi / length;
  auto f = [&](double t) { return std::abs(dk(sign * t)) - target; };
  const int n = 4000;
  double prev = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double t = hi * i / n;
    if (f(t) >= 0.0) return bisect(f, prev, t);
    prev = t;
  }
  throw std::runtime_error("no crossing in scan range");
}

std::map<std::string, ProfileMetrics> metrics_of(const RunManifest& m) {
  if (m.exit_code != 0) throw std::runtime_error(m.scenario + ": " + m.error);
  std::map<std::string, ProfileMetrics> out;
  for (const MetricsRow& r : m.metrics) out[r.artifact] = r.metrics;
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

double linf(const Profile& a, const Profile& b) { return (a.values - b.values).abs().maxCoeff(); }

}  // namespace

int main() {
  std::random_device rd;
  const fs::path work = fs::temp_directory_path() / ("ghostsim_acceptance_" + std::to_string(rd()));
  fs::create_directories(work);
  const double lengths[] = {1e-3, 3e-3, 6e-3};
  const double waves[] = {805e-9, 810e-9, 815e-9};

  report(1, [&] {
    Outcome o;
    double worst1 = 0.0, worst2 = 0.0;
    for (double L : lengths) {
      for (double lam : waves) {
        const Wavelength l(lam);
        const Wavelength pump(lam / 2);
        const PhaseMatchConfig t1 = solved(L, pump, InteractionType::TypeI);
        const double k1 = wavevector(l, n_o(t1.crystal, l));
        const double s1 = scan_acceptance([&](double t) { return delta_kz_type1_degenerate(t1, TransverseK(k1 * t)); }, L,
                                          1.0, 0.2);
        worst1 = std::max(worst1, std::abs(s1 / theta_max_type1(t1, l) - 1));

        PhaseMatchConfig t2 = solved(L, pump, InteractionType::TypeII);
        t2.approximation = Approximation::LinearDominant;
        const double k2 = wavevector(l, signal_index(t2, l));
        auto dk2 = [&](double t) { return delta_kz_type2(t2, TransverseK(k2 * t), l); };
        for (double sign : {1.0, -1.0}) {
          const double s2 = scan_acceptance(dk2, L, sign, 0.05);
          worst2 = std::max(worst2, std::abs(s2 / theta_max_type2(t2, l) - 1));
        }
      }
    }
    o.require(worst1 < tol::identity_rel, fmt("type I worst rel %.2e < %.0e", worst1, tol::identity_rel));
    o.require(worst2 < tol::identity_rel, fmt("type II worst rel %.2e < %.0e", worst2, tol::identity_rel));
    return o;
  }, limit::c1);

  report(2, [&] {
    Outcome o;
    const Wavelength l = nanometers(810.0);
    const PhaseMatchConfig t2 = solved(3e-3, nanometers(405.0), InteractionType::TypeII);
    const PhaseMatchConfig t1 = solved(3e-3, nanometers(405.0), InteractionType::TypeI);
    const double a2 = theta_max_type2(t2, l), a1 = theta_max_type1(t1, l);
    o.require(a2 < a1 / tol::astig_factor, fmt("theta_II %.4g mrad < theta_I/3 = %.4g mrad", a2 * 1e3, a1 * 1e3 / 3));
    const Profile curve = phasematch_curve(t2, l, GridSpec{-15e-3, 15e-3, 4097}.nodes());
    const double w = profile_metrics(curve).fwhm;
    o.require(w > tol::measured_width / tol::width_factor && w < tol::measured_width * tol::width_factor,
              fmt("exterior FWHM %.4g mrad vs 3.7 mrad (x%.3g)", w * 1e3, w / tol::measured_width));
    o.detail += fmt("; 2 theta_II exterior %.4g mrad", 2e3 * interior_to_exterior(a2, signal_index(t2, l)));
    return o;
  }, limit::c2);

  report(3, [&] {
    Outcome o;
    ImagingGeometry g;
    g.slit_width = 0.0;
    const Eigen::ArrayXd x = GridSpec{-600e-6, 600e-6, 1024}.nodes();
    const Wavelength l = nanometers(810.0);
    ImagingOptions printed;
    printed.factored_form = FactoredForm::Printed;
    std::string printed_note;
    for (double L : lengths) {
      const PhaseMatchConfig c = solved(L, nanometers(405.0), InteractionType::TypeII);
      const Profile direct = psf_single_frequency(g, c, l, x);
      const double e = linf(psf_factored(g, c, l, x), direct);
      o.require(e < tol::factored_linf, fmt("L=%g mm Linf %.2e", L * 1e3, e));
      printed_note += fmt(" %.3g", linf(psf_factored(g, c, l, x, printed), direct));
    }
    o.detail += "; printed-form Linf:" + printed_note;
    return o;
  }, limit::c3);

  report(4, [&] {
    Outcome o;
    ImagingGeometry g;
    g.slit_width = 0.0;
    const GridSpec grid{-600e-6, 600e-6, 1024};
    const Wavelength l = nanometers(810.0);
    for (double L : {3e-3, 6e-3}) {
      const PhaseMatchConfig c = solved(L, nanometers(405.0), InteractionType::TypeII);
      const double got = profile_metrics(psf_single_frequency(g, c, l, grid.nodes())).centroid;
      const double want = walkoff_center(c);
      o.require(std::abs(got / want - 1) < tol::walkoff_rel,
                fmt("L=%g mm centroid %.4g um vs %.4g um", L * 1e3, got * 1e6, want * 1e6));
    }
    const PhaseMatchConfig t1 = solved(3e-3, nanometers(405.0), InteractionType::TypeI);
    const double c1 = profile_metrics(psf_single_frequency(g, t1, l, grid.nodes())).centroid;
    o.require(std::abs(c1) <= grid.step(), fmt("type I centroid %.3g um (step %.3g um)", c1 * 1e6, grid.step() * 1e6));
    return o;
  }, limit::c4);

  report(5, [&] {
    Outcome o;
    std::map<std::string, std::map<std::string, ProfileMetrics>> r;
    for (const char* s : {"fig14a", "fig14b", "fig14c"}) r[s] = metrics_of(run_scenario(ScenarioSpec{s, {}, {}, false}, work / "c5"));
    auto ratio = [&](const char* s) { return r[s]["psf_fast"].fwhm / r[s]["psf_slow"].fwhm; };
    const double ra = ratio("fig14a"), rb = ratio("fig14b"), rc = ratio("fig14c");
    o.require(std::abs(ra - 1) <= tol::fig14a_rel, fmt("(a) fast/slow %.3f within 10%%", ra));
    o.require(rb < tol::fig14b_fast_over_slow, fmt("(b) fast/slow %.3f < 0.7", rb));
    const double sb = r["fig14b"]["psf_slow"].fwhm / r["fig14b"]["psf_single"].fwhm;
    o.require(std::abs(sb - 1) <= tol::fig14b_slow_rel, fmt("(b) slow/single %.3f within 15%%", sb));
    o.require(rc < rb, fmt("(c) fast/slow %.3f < %.3f", rc, rb));
    return o;
  }, limit::c5);

  report(6, [&] {
    Outcome o;
    std::map<std::string, std::map<std::string, ProfileMetrics>> r;
    for (const char* s : {"fig15a", "fig15b", "fig15c"}) r[s] = metrics_of(run_scenario(ScenarioSpec{s, {}, {}, false}, work / "c6"));
    const double w1 = r["fig15a"]["curve_center"].fwhm, w3 = r["fig15b"]["curve_center"].fwhm,
                 w6 = r["fig15c"]["curve_center"].fwhm;
    o.require(std::abs(w6 / w3 / 0.5 - 1) <= tol::fig15_rel, fmt("FWHM 6mm/3mm %.4f (target 0.5)", w6 / w3));
    o.require(std::abs(w1 / w3 / 2.0 - 1) <= tol::fig15_rel, fmt("FWHM 1mm/3mm %.4f (target 2)", w1 / w3));
    const RunConfig cfg = scenario_config(ScenarioSpec{"fig15b", {}, {}, false});
    const double step = cfg.angle_grid.step();
    double shift = 0.0;
    for (const char* c : {"curve_short", "curve_center", "curve_long"}) {
      for (const char* s : {"fig15a", "fig15c"}) {
        shift = std::max(shift, std::abs(r[s][c].peak_position - r["fig15b"][c].peak_position));
      }
    }
    o.require(shift < step, fmt("max peak shift %.3g mrad < step %.3g mrad", shift * 1e3, step * 1e3));
    return o;
  }, limit::c6);

  report(7, [&] {
    Outcome o;
    const RunConfig near = scenario_config(ScenarioSpec{"fig6a", {}, {}, false}).resolved();
    const RunConfig far = scenario_config(ScenarioSpec{"fig3b", {}, {}, false}).resolved();
    const double w = near.geometry.slit_width;
    const ProfileMetrics mn = profile_metrics(ccr_fully_phasematched(near.geometry, near.signal, near.x_grid.nodes(), near.imaging));
    const ProfileMetrics mf = profile_metrics(ccr_fully_phasematched(far.geometry, far.signal, far.x_grid.nodes(), far.imaging));
    o.require(std::abs(mn.fwhm / w - 1) <= tol::slit_rel, fmt("d2=50 mm FWHM %.4g um", mn.fwhm * 1e6));
    o.require(mf.edge_width_10_90 > tol::blur_edge_fraction * w,
              fmt("d2=750 mm edge %.4g um > %.4g um", mf.edge_width_10_90 * 1e6, tol::blur_edge_fraction * w * 1e6));
    return o;
  }, limit::c7);

  report(8, [&] {
    Outcome o;
    ImagingGeometry g;
    g.pump_radius = 1.5e-3;
    g.distance = 750e-3;
    const double a = g.numerical_aperture();
    g.distance = 50e-3;
    const double b = g.numerical_aperture();
    o.require(a == 0.002, fmt("NA(750 mm) = %.17g", a));
    o.require(b == 0.03, fmt("NA(50 mm) = %.17g", b));
    return o;
  });

  report(9, [&] {
    Outcome o;
    double worst_d = 0.0;
    const CrystalSpec c = bbo(3e-3);
    for (double nm : {405.0, 805.0, 810.0, 815.0}) {
      for (double t : {0.3, 0.7294, 1.1}) {
        const double h = 1e-5;
        const double fd = (n_e_at_angle(c, nanometers(nm), t + h) - n_e_at_angle(c, nanometers(nm), t - h)) / (2 * h);
        worst_d = std::max(worst_d, std::abs(dn_e_dtheta(c, nanometers(nm), t) / fd - 1));
      }
    }
    o.require(worst_d < tol::derivative_rel, fmt("derivative rel %.2e", worst_d));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    const UniformAxis kappa{-2.4e5, 3.7e3, 128};
    const UniformAxis x{-6e-4, 1.1e-6, 1024};
    Eigen::ArrayXcd f(128);
    for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = Complex(u(rng), u(rng));
    const Eigen::ArrayXcd slow = fourier_direct(f, kappa, x.nodes());
    const double fe = (fourier_profile(f, kappa, x) - slow).abs().maxCoeff() / slow.abs().maxCoeff();
    o.require(fe < tol::fourier_rel, fmt("fourier rel %.2e", fe));

    const std::vector<std::pair<std::string, std::string>> finer{
        {"numerics.sampling_scale", "2"}, {"grid.x_points", "2047"},   {"band.samples", "81"},
        {"grid.angle_points", "2047"},    {"grid.map_points", "321"}};
    double worst = 0.0;
    std::string worst_name;
    int profiles = 0;
    for (const ScenarioInfo& s : list_scenarios()) {
      const auto base = metrics_of(run_scenario(ScenarioSpec{s.name, {}, {}, false}, work / "c9a"));
      const auto fine = metrics_of(run_scenario(ScenarioSpec{s.name, finer, {}, false}, work / "c9b"));
      for (const auto& [name, m] : base) {
        const double d = std::abs(fine.at(name).fwhm / m.fwhm - 1);
        ++profiles;
        if (d > worst) {
          worst = d;
          worst_name = s.name + "/" + name;
        }
      }
    }
    o.require(worst < tol::refinement_rel,
              fmt("refinement worst FWHM change %.3g%% over %g profiles", worst * 100, profiles) + " (" + worst_name + ")");
    return o;
  });

  report(10, [&] {
    Outcome o;
    int files = 0, differing = 0;
    for (const ScenarioInfo& s : list_scenarios()) {
      const RunManifest a = run_scenario(ScenarioSpec{s.name, {}, {}, false}, work / "c10a");
      const RunManifest b = run_scenario(ScenarioSpec{s.name, {}, {}, false}, work / "c10b");
      if (a.exit_code != 0 || b.exit_code != 0) throw std::runtime_error(s.name + ": " + a.error + b.error);
      for (const std::string& f : a.artifacts) {
        if (!f.ends_with(".csv")) continue;
        ++files;
        if (slurp(a.directory / f) != slurp(b.directory / f)) ++differing;
      }
    }
    o.require(differing == 0, fmt("%g of %g CSV files differ", differing, files));
    return o;
  });

  std::error_code ec;
  fs::remove_all(work, ec);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
