#pragma once

// Quadrature and discrete Fourier services with explicit accuracy contracts.

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <numbers>
#include <type_traits>
#include <vector>

#include "ghostsim/errors.hpp"

namespace ghostsim {

using Complex = std::complex<double>;

enum class QuadratureRule { GaussLegendreComposite, Trapezoid };

struct QuadratureSpec {
  QuadratureRule rule = QuadratureRule::GaussLegendreComposite;
  int panels = 16;
  int points_per_panel = 8;
  double target_rel_error = 1e-4;
  int max_refinements = 6;  ///< each refinement doubles the panel count

  void validate() const;
};

/// Uniform axis: start, start + step, ..., start + (size - 1) step.
struct UniformAxis {
  double start = 0.0;
  double step = 0.0;
  Eigen::Index size = 0;

  double at(Eigen::Index i) const { return start + static_cast<double>(i) * step; }
  double back() const { return at(size - 1); }
  Eigen::ArrayXd nodes() const;
};

/// Closed interval sampled uniformly at `points` nodes, endpoints included.
struct GridSpec {
  double min = -1.0;
  double max = 1.0;
  Eigen::Index points = 256;

  void validate() const;
  double step() const { return (max - min) / static_cast<double>(points - 1); }
  UniformAxis axis() const;
  Eigen::ArrayXd nodes() const;
};

/// Gauss-Legendre rule on [-1, 1].
template <class Scalar = double>
struct GaussLegendre {
  Eigen::Array<Scalar, Eigen::Dynamic, 1> nodes;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> weights;

  explicit GaussLegendre(int n) : nodes(n), weights(n) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
      Scalar x = std::cos(std::numbers::pi_v<Scalar> * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
      Scalar dp = 0;
      for (int iter = 0; iter < 100; ++iter) {
        Scalar p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        if (n == 1) p0 = 1;
        dp = n * (x * p1 - p0) / (x * x - 1);
        const Scalar dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 4 * std::numeric_limits<Scalar>::epsilon()) break;
      }
      // Recompute derivative at the converged node for the weight.
      Scalar p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = (n == 1) ? Scalar(1) : n * (x * p1 - p0) / (x * x - 1);
      const Scalar w = 2 / ((1 - x * x) * dp * dp);
      nodes(i) = -x;
      nodes(n - 1 - i) = x;
      weights(i) = w;
      weights(n - 1 - i) = w;
    }
    if (n % 2 == 1) nodes(n / 2) = 0;
  }
};

template <class Value>
struct QuadratureResult {
  Value value;
  double error_estimate = 0.0;  ///< |I_2n - I_n| from the last refinement
  int evaluations = 0;
  int refinements = 0;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const Complex& v) { return std::abs(v); }
template <class Derived>
double magnitude(const Eigen::ArrayBase<Derived>& v) {
  return v.size() == 0 ? 0.0 : static_cast<double>(v.abs().maxCoeff());
}

inline double scaled_abs(double w, double v) { return w * std::abs(v); }
inline double scaled_abs(double w, const Complex& v) { return w * std::abs(v); }
template <class Derived>
Eigen::ArrayXd scaled_abs(double w, const Eigen::ArrayBase<Derived>& v) {
  return w * v.abs().template cast<double>();
}

inline Complex summary(double v) { return v; }
inline Complex summary(const Complex& v) { return v; }
template <class Derived>
Complex summary(const Eigen::ArrayBase<Derived>& v) {
  if (v.size() == 0) return {};
  Eigen::Index i = 0;
  v.abs().maxCoeff(&i);
  return Complex(v(i));
}

template <class Value, class = void>
struct stored {
  using type = Value;
};
template <class Value>
struct stored<Value, std::void_t<typename Value::PlainObject>> {
  using type = typename Value::PlainObject;
};

template <class Value, class F>
Value composite(F& f, const QuadratureSpec& spec, int panels, double a, double b, double& l1, int& evals) {
  using Abs = decltype(scaled_abs(1.0, std::declval<Value>()));
  Value sum{};
  Abs abs_sum{};
  bool first = true;
  auto accumulate = [&](double w, const auto& v) {
    if (first) {
      sum = w * v;
      abs_sum = scaled_abs(w, v);
      first = false;
    } else {
      sum += w * v;
      abs_sum += scaled_abs(w, v);
    }
  };
  if (spec.rule == QuadratureRule::Trapezoid) {
    const int n = panels * std::max(1, spec.points_per_panel - 1);
    const double dx = (b - a) / n;
    for (int i = 0; i <= n; ++i) {
      const double x = (i == n) ? b : a + i * dx;
      const double w = (i == 0 || i == n) ? 0.5 * dx : dx;
      accumulate(w, f(x));
    }
    evals += n + 1;
  } else {
    const GaussLegendre<double> gl(spec.points_per_panel);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = a + (p + 0.5) * h;
      for (Eigen::Index q = 0; q < gl.nodes.size(); ++q) {
        accumulate(0.5 * h * gl.weights(q), f(mid + 0.5 * h * gl.nodes(q)));
      }
    }
    evals += panels * static_cast<int>(gl.nodes.size());
  }
  l1 = magnitude(abs_sum);
  return sum;
}

}  // namespace detail

/// Integrates `f` over [a, b]. The integrand may return double, complex, or an
/// Eigen array (integrated component-wise). The panel count doubles until two
/// successive estimates agree to `target_rel_error` relative to the result
/// (or to roundoff relative to the integral of |f|). Throws ConvergenceError
/// with the best estimate after `max_refinements` doublings.
template <class F>
auto integrate_1d(F&& f, const QuadratureSpec& spec, double a, double b) {
  using Value = std::decay_t<decltype(std::declval<std::decay_t<F>&>()(0.0))>;
  using Stored = typename detail::stored<Value>::type;
  spec.validate();
  if (!(a < b)) throw ArgumentError("integration interval must satisfy a < b");

  QuadratureResult<Stored> result;
  double l1 = 0.0;
  Stored previous = detail::composite<Stored>(f, spec, spec.panels, a, b, l1, result.evaluations);
  for (int level = 1; level <= spec.max_refinements; ++level) {
    const int panels = spec.panels << level;
    Stored current = detail::composite<Stored>(f, spec, panels, a, b, l1, result.evaluations);
    const double err = detail::magnitude(Stored(current - previous));
    const double scale = detail::magnitude(current);
    result.value = current;
    result.error_estimate = err;
    result.refinements = level;
    if (err <= spec.target_rel_error * scale || err <= 64 * std::numeric_limits<double>::epsilon() * l1) {
      return result;
    }
    previous = std::move(current);
  }
  throw ConvergenceError("integrate_1d: no convergence after " + std::to_string(spec.max_refinements) +
                             " refinements (error estimate " + std::to_string(result.error_estimate) + ")",
                         detail::summary(result.value), result.error_estimate);
}

/// Root of a continuous function with f(lo) f(hi) <= 0, bisected until the
/// bracket cannot shrink further in double precision.
template <class F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  const double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw ArgumentError("bisect: root not bracketed");
  for (int i = 0; i < 2000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Brute-force evaluation of sum_j f_j exp(-i kappa_j x) dkappa at each x.
Eigen::ArrayXcd fourier_direct(const Eigen::Ref<const Eigen::ArrayXcd>& samples, const UniformAxis& kappa,
                               const Eigen::Ref<const Eigen::ArrayXd>& x);

/// Chirp-z (Bluestein) evaluation of the same sum on a uniform target axis.
/// The plan owns the transformed chirp and can be applied to many sample sets
/// that share the same kappa and x axes.
class ChirpZPlan {
 public:
  ChirpZPlan(const UniformAxis& kappa, const UniformAxis& x);

  Eigen::ArrayXcd apply(const Eigen::Ref<const Eigen::ArrayXcd>& samples) const;

  const UniformAxis& kappa() const noexcept { return kappa_; }
  const UniformAxis& x() const noexcept { return x_; }

 private:
  UniformAxis kappa_;
  UniformAxis x_;
  std::size_t fft_size_ = 0;
  std::vector<Complex> input_chirp_;   // exp(-i kappa_j x0) exp(-i w j^2 / 2)
  std::vector<Complex> output_chirp_;  // dkappa exp(-i kappa0 x_k) exp(-i w k^2 / 2)
  std::vector<Complex> kernel_fft_;
};

/// Fast path for sum_j f_j exp(-i kappa_j x) dkappa on a uniform x axis.
/// Throws AliasingError when the x span reaches the period 2 pi / dkappa of
/// the discrete sum.
Eigen::ArrayXcd fourier_profile(const Eigen::Ref<const Eigen::ArrayXcd>& samples, const UniformAxis& kappa,
                                const UniformAxis& x);

}  // namespace ghostsim
