#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "parab/util.hpp"

namespace parab {

struct Jet2 {
  double value;
  double d1;
  double d2;
};

/// Angular potential U(theta) = a0 + sum_k a_k cos(k theta) + b_k sin(k theta).
/// Restricting potentials to trigonometric polynomials gives exact term-wise
/// derivatives and exact 2pi-periodicity, which root finding relies on.
class TrigPolynomial {
 public:
  TrigPolynomial() : constant_(0.0) {}
  TrigPolynomial(double constant, std::vector<double> cos_coeffs,
                 std::vector<double> sin_coeffs)
      : constant_(constant), cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {
    if (sin_.size() < cos_.size()) sin_.resize(cos_.size(), 0.0);
    if (cos_.size() < sin_.size()) cos_.resize(sin_.size(), 0.0);
  }

  static TrigPolynomial constant_potential(double c) { return TrigPolynomial(c, {}, {}); }

  double constant_term() const { return constant_; }
  const std::vector<double>& cos_coeffs() const { return cos_; }
  const std::vector<double>& sin_coeffs() const { return sin_; }
  std::size_t max_frequency() const { return cos_.size(); }

  bool is_constant(double tol = 0.0) const {
    for (std::size_t i = 0; i < cos_.size(); ++i)
      if (std::abs(cos_[i]) > tol || std::abs(sin_[i]) > tol) return false;
    return true;
  }

  Jet2 jet(double theta) const {
    Jet2 out{constant_, 0.0, 0.0};
    for (std::size_t i = 0; i < cos_.size(); ++i) {
      const double k = static_cast<double>(i + 1);
      const double c = std::cos(k * theta);
      const double s = std::sin(k * theta);
      out.value += cos_[i] * c + sin_[i] * s;
      out.d1 += k * (-cos_[i] * s + sin_[i] * c);
      out.d2 += k * k * (-cos_[i] * c - sin_[i] * s);
    }
    return out;
  }

  double operator()(double theta) const {
    double v = constant_;
    for (std::size_t i = 0; i < cos_.size(); ++i) {
      const double k = static_cast<double>(i + 1);
      v += cos_[i] * std::cos(k * theta) + sin_[i] * std::sin(k * theta);
    }
    return v;
  }

  double derivative(double theta) const { return jet(theta).d1; }
  double second_derivative(double theta) const { return jet(theta).d2; }

 private:
  double constant_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

enum class CriticalKind { minimum, maximum, degenerate };

/// A critical point of U; "central configuration" of the planar potential.
struct CentralConfiguration {
  double angle = 0.0;
  double value = 0.0;      // U(angle)
  double curvature = 0.0;  // U''(angle)
  CriticalKind kind = CriticalKind::degenerate;
};

struct RootScanOptions {
  int samples = 2048;              // per period; Nyquist-safe for frequencies <= 16
  double tol = 1e-12;              // |U'| target for polished roots
  double curvature_rel_tol = 1e-9; // |U''| <= this * U flags a degenerate root
};

namespace detail {

inline double bisect_derivative(const TrigPolynomial& u, double a, double b, double fa,
                                double tol) {
  // fa and f(b) have opposite signs.
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = u.derivative(m);
    if (fm == 0.0) return m;
    if ((fa < 0.0) == (fm < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

inline double polish_root(const TrigPolynomial& u, double x, double tol) {
  for (int it = 0; it < 8; ++it) {
    const Jet2 j = u.jet(x);
    if (std::abs(j.d1) < 0.1 * tol || j.d2 == 0.0) break;
    const double step = j.d1 / j.d2;
    if (!std::isfinite(step) || std::abs(step) > 0.1) break;
    x -= step;
  }
  return x;
}

}  // namespace detail

/// All roots of U' in [0, 2pi), polished to |U'| < tol and sorted by angle.
/// Degenerate roots (|U''| below the relative tolerance) are flagged, not dropped.
inline std::vector<CentralConfiguration> find_central_configurations(
    const TrigPolynomial& u, const RootScanOptions& opts = {}) {
  if (u.is_constant())
    throw std::invalid_argument("find_central_configurations: constant potential");

  const int n = opts.samples;
  std::vector<CentralConfiguration> out;
  auto push_root = [&](double x) {
    x = std::fmod(x, kTwoPi);
    if (x < 0.0) x += kTwoPi;
    for (const auto& c : out) {
      double d = std::abs(c.angle - x);
      d = std::min(d, kTwoPi - d);
      if (d < 64.0 * opts.tol) return;
    }
    const Jet2 j = u.jet(x);
    CentralConfiguration c;
    c.angle = x;
    c.value = j.value;
    c.curvature = j.d2;
    const double degen = opts.curvature_rel_tol * std::max(1.0, std::abs(j.value));
    if (std::abs(j.d2) <= degen)
      c.kind = CriticalKind::degenerate;
    else
      c.kind = j.d2 > 0.0 ? CriticalKind::minimum : CriticalKind::maximum;
    out.push_back(c);
  };

  double prev_x = 0.0;
  double prev_f = u.derivative(0.0);
  for (int i = 1; i <= n; ++i) {
    const double x = kTwoPi * static_cast<double>(i) / n;
    const double f = u.derivative(x);
    if (prev_f == 0.0) {
      push_root(prev_x);
    } else if (f != 0.0 && (prev_f < 0.0) != (f < 0.0)) {
      double r = detail::bisect_derivative(u, prev_x, x, prev_f, 0.25 * opts.tol);
      r = detail::polish_root(u, r, opts.tol);
      push_root(r);
    }
    prev_x = x;
    prev_f = f;
  }

  // Even-multiplicity roots leave no sign change; pick up grid dips of |U'|.
  const double dip_tol = 1e-6 * (1.0 + std::abs(u.constant_term()));
  for (int i = 0; i < n; ++i) {
    const double xm = kTwoPi * (i - 1.0) / n;
    const double x0 = kTwoPi * (i + 0.0) / n;
    const double xp = kTwoPi * (i + 1.0) / n;
    const double fm = std::abs(u.derivative(xm));
    const double f0 = std::abs(u.derivative(x0));
    const double fp = std::abs(u.derivative(xp));
    if (f0 < dip_tol && f0 <= fm && f0 <= fp) {
      // ternary search on |U'| over the bracketing grid cell
      double a = xm, b = xp;
      for (int it = 0; it < 120; ++it) {
        const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
        if (std::abs(u.derivative(m1)) < std::abs(u.derivative(m2)))
          b = m2;
        else
          a = m1;
      }
      const double r = 0.5 * (a + b);
      if (std::abs(u.derivative(r)) < opts.tol) push_root(r);
    }
  }

  std::sort(out.begin(), out.end(),
            [](const CentralConfiguration& a, const CentralConfiguration& b) {
              return a.angle < b.angle;
            });
  return out;
}

/// Global range of U over one period (extrema of a trig polynomial sit at
/// critical points).
inline std::pair<double, double> potential_range(const TrigPolynomial& u,
                                                 const RootScanOptions& opts = {}) {
  if (u.is_constant()) return {u.constant_term(), u.constant_term()};
  double lo = u(0.0), hi = u(0.0);
  for (const auto& c : find_central_configurations(u, opts)) {
    lo = std::min(lo, c.value);
    hi = std::max(hi, c.value);
  }
  return {lo, hi};
}

struct ClassUDiagnosis {
  bool pass = false;
  bool critical_1 = false, critical_2 = false;
  bool nondegenerate_1 = false, nondegenerate_2 = false;
  bool equal_level = false;
  bool positive_level = false;
  bool global_minimum = false;
  double level_1 = 0.0, level_2 = 0.0;
  std::string message;
};

/// Membership test for the admissible class: theta1, theta2 must be
/// nondegenerate global minima of U at the same positive level.
inline ClassUDiagnosis check_class_U(const TrigPolynomial& u, double theta1, double theta2,
                                     const RootScanOptions& opts = {}) {
  ClassUDiagnosis d;
  const Jet2 j1 = u.jet(theta1);
  const Jet2 j2 = u.jet(theta2);
  d.level_1 = j1.value;
  d.level_2 = j2.value;
  const double scale = std::max({1.0, std::abs(j1.value), std::abs(j2.value)});
  const double crit_tol = 1e-8 * scale;
  const double level_tol = 1e-8 * scale;

  d.critical_1 = std::abs(j1.d1) < crit_tol;
  d.critical_2 = std::abs(j2.d1) < crit_tol;
  d.nondegenerate_1 = j1.d2 > opts.curvature_rel_tol * scale;
  d.nondegenerate_2 = j2.d2 > opts.curvature_rel_tol * scale;
  d.equal_level = std::abs(j1.value - j2.value) < level_tol;
  d.positive_level = j1.value > 0.0 && j2.value > 0.0;

  d.global_minimum = true;
  const double level = std::min(j1.value, j2.value);
  const int n = opts.samples;
  for (int i = 0; i < n; ++i) {
    const double x = kTwoPi * i / n;
    if (u(x) < level - level_tol) {
      d.global_minimum = false;
      break;
    }
  }
  if (d.global_minimum && !u.is_constant()) {
    for (const auto& c : find_central_configurations(u, opts)) {
      if (c.value < level - level_tol) {
        d.global_minimum = false;
        break;
      }
    }
  }

  d.pass = d.critical_1 && d.critical_2 && d.nondegenerate_1 && d.nondegenerate_2 &&
           d.equal_level && d.positive_level && d.global_minimum;
  if (d.pass) {
    d.message = "class-U: pass";
  } else {
    d.message = "class-U fail:";
    if (!d.critical_1) d.message += " theta1-not-critical";
    if (!d.critical_2) d.message += " theta2-not-critical";
    if (!d.nondegenerate_1) d.message += " theta1-degenerate-or-max";
    if (!d.nondegenerate_2) d.message += " theta2-degenerate-or-max";
    if (!d.equal_level) d.message += " unequal-levels";
    if (!d.positive_level) d.message += " nonpositive-level";
    if (!d.global_minimum) d.message += " not-global-minimum";
  }
  return d;
}

/// Strict concavity test at a critical angle: U''(theta) < -(2-alpha)^2/8 U(theta).
/// Monotone in alpha: once true it stays true for every smaller alpha.
inline bool too_strict_test(const TrigPolynomial& u, double theta_bar, double alpha,
                            double crit_tol = 1e-8) {
  const Jet2 j = u.jet(theta_bar);
  if (std::abs(j.d1) >= crit_tol * std::max(1.0, std::abs(j.value)))
    throw std::invalid_argument("too_strict_test: theta_bar is not a critical point");
  const double rhs = -(2.0 - alpha) * (2.0 - alpha) / 8.0 * j.value;
  return j.d2 < rhs;
}

}  // namespace parab
