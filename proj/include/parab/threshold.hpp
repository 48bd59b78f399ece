#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "parab/manifolds.hpp"
#include "parab/trig_poly.hpp"
#include "parab/util.hpp"

namespace parab {

/// theta_hat_minus(alpha) - theta_hat_plus(alpha); strictly increasing in
/// alpha, with the unique zero (when it exists) at the threshold exponent.
inline double gap(const TrigPolynomial& u, double alpha, double theta_minus,
                  double theta_plus, const ApsidalOptions& opts = {}) {
  return unstable_apsidal(u, alpha, theta_minus, opts).theta_hat -
         stable_apsidal(u, alpha, theta_plus, opts).theta_hat;
}

/// Necessary bracket for a saddle connection:
///   2 - 2pi/(dtheta) <= alpha <= 2 - 4/(dtheta) arcsin sqrt(Umin/Umax),
/// clipped to [0, 2].
inline std::pair<double, double> lemma22_bounds(const TrigPolynomial& u, double theta_minus,
                                                double theta_plus) {
  if (!(theta_plus > theta_minus))
    throw std::invalid_argument("lemma22_bounds: theta_plus must exceed theta_minus");
  const double dtheta = theta_plus - theta_minus;
  const auto [umin, umax] = potential_range(u);
  const double lo = 2.0 - kTwoPi / dtheta;
  const double hi = 2.0 - 4.0 / dtheta * std::asin(std::sqrt(umin / umax));
  auto clip = [](double x) { return std::clamp(x, 0.0, 2.0); };
  return {clip(lo), clip(hi)};
}

enum class ThresholdStatus { found, below_range, above_range };

inline const char* to_string(ThresholdStatus s) {
  switch (s) {
    case ThresholdStatus::found: return "found";
    case ThresholdStatus::below_range: return "below_range";
    case ThresholdStatus::above_range: return "above_range";
  }
  return "?";
}

struct ReducedProblem {
  TrigPolynomial u;
  double theta_minus;
  double theta_plus;
  double alpha_bar;  // threshold of the reduced problem (if found)
};

struct ThresholdResult {
  ThresholdStatus status = ThresholdStatus::found;
  double alpha_bar = 0.0;  // root when found; see extended_value() otherwise
  std::pair<double, double> bracket{0.0, 0.0};
  std::pair<double, double> gap_at_bracket{0.0, 0.0};
  std::pair<double, double> lemma_bounds{0.0, 2.0};
  int winding_h = 0;
  std::optional<ReducedProblem> reduced;
  int iterations = 0;

  bool found() const { return status == ThresholdStatus::found; }
  /// The paper extends alpha_bar by 0 when no parabolic trajectory exists for
  /// any exponent (the gap is positive throughout); the above_range sentinel
  /// (inf over an empty set) carries no numeric value.
  std::optional<double> extended_value() const {
    if (status == ThresholdStatus::found) return alpha_bar;
    if (status == ThresholdStatus::below_range) return 0.0;
    return std::nullopt;
  }
};

struct ThresholdOptions {
  ApsidalOptions apsidal{};
  double edge_inset = 1e-3;  // pull bracket endpoints inward from {0, 2}
  int max_iterations = 200;
};

namespace detail {

inline void validate_minimum(const TrigPolynomial& u, double theta, const char* who) {
  const Jet2 j = u.jet(theta);
  const double scale = std::max(1.0, std::abs(j.value));
  if (std::abs(j.d1) > 1e-8 * scale || j.d2 <= 1e-9 * scale)
    throw std::invalid_argument(std::string(who) +
                                ": endpoint is not a nondegenerate minimum of U");
}

}  // namespace detail

/// Bisection on the (monotone) gap inside lemma22_bounds for a base sector
/// 0 < dtheta <= 2pi. Bisection rather than secant: gap evaluations are
/// monotone but carry integrator-floor noise, and bisection cannot overshoot.
/// For dtheta <= pi a root may or may not exist; sentinels cover both exits.
inline ThresholdResult find_alpha_bar(const TrigPolynomial& u, double theta_minus,
                                      double theta_plus, double tol = 1e-8,
                                      const ThresholdOptions& opts = {}) {
  const double dtheta = theta_plus - theta_minus;
  if (!(dtheta > 0.0 && dtheta <= kTwoPi + 1e-12))
    throw std::invalid_argument("find_alpha_bar: sector must satisfy 0 < dtheta <= 2pi");
  detail::validate_minimum(u, theta_minus, "find_alpha_bar");
  detail::validate_minimum(u, theta_plus, "find_alpha_bar");

  ThresholdResult res;
  res.lemma_bounds = lemma22_bounds(u, theta_minus, theta_plus);
  double lo = std::max(res.lemma_bounds.first, opts.edge_inset);
  double hi = std::min(res.lemma_bounds.second, 2.0 - opts.edge_inset);
  if (!(lo < hi)) lo = std::min(lo, hi);

  ApsidalOptions fast = opts.apsidal;
  fast.error_estimate = false;  // the bisection only consumes signs
  auto eval = [&](double a) { return gap(u, a, theta_minus, theta_plus, fast); };

  double g_lo = eval(lo);
  double g_hi = eval(hi);
  res.iterations = 2;
  if (g_lo > 0.0) {
    res.status = ThresholdStatus::below_range;
    res.bracket = {lo, hi};
    res.gap_at_bracket = {g_lo, g_hi};
    return res;
  }
  if (g_hi < 0.0) {
    res.status = ThresholdStatus::above_range;
    res.bracket = {lo, hi};
    res.gap_at_bracket = {g_lo, g_hi};
    return res;
  }

  while (hi - lo > tol && res.iterations < opts.max_iterations) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = eval(mid);
    ++res.iterations;
    if (g_mid < 0.0) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
      g_hi = g_mid;
    }
  }
  res.status = ThresholdStatus::found;
  res.alpha_bar = 0.5 * (lo + hi);
  res.bracket = {lo, hi};
  res.gap_at_bracket = {g_lo, g_hi};
  return res;
}

/// Winding reduction: for 2 h pi < dtheta <= 2 (h+1) pi the substitution
/// r = rho^(h+1), theta = (h+1) phi maps the problem onto the base sector with
///   Utilde(phi) = U((h+1) phi)/(h+1)^2,  frequencies scaled by (h+1).
/// h = 0 is the identity.
inline std::tuple<TrigPolynomial, double, double, int> conformal_reduce(
    const TrigPolynomial& u, double theta_minus, double theta_plus) {
  const double dtheta = theta_plus - theta_minus;
  if (!(dtheta > 0.0))
    throw std::invalid_argument("conformal_reduce: requires theta_plus > theta_minus");
  int h = static_cast<int>(std::ceil(dtheta / kTwoPi - 1e-12)) - 1;
  if (h < 0) h = 0;
  if (h == 0) return {u, theta_minus, theta_plus, 0};

  const int beta = h + 1;
  const double scale = 1.0 / (static_cast<double>(beta) * beta);
  const std::size_t k_max = u.max_frequency();
  std::vector<double> cos_out(k_max * beta, 0.0);
  std::vector<double> sin_out(k_max * beta, 0.0);
  for (std::size_t k = 1; k <= k_max; ++k) {
    cos_out[k * beta - 1] = u.cos_coeffs()[k - 1] * scale;
    sin_out[k * beta - 1] = u.sin_coeffs()[k - 1] * scale;
  }
  TrigPolynomial ut(u.constant_term() * scale, std::move(cos_out), std::move(sin_out));
  return {ut, theta_minus / beta, theta_plus / beta, h};
}

/// Threshold for an arbitrary pair of minimal configurations on the cover:
/// reduces by time reversal (theta_plus < theta_minus) and by winding, solves
/// the base sector, and maps back through
///   alpha_bar = 2 - (2 - alpha_bar_reduced)/(h+1).
inline ThresholdResult find_alpha_bar_general(const TrigPolynomial& u, double theta_minus,
                                              double theta_plus, double tol = 1e-8,
                                              const ThresholdOptions& opts = {}) {
  if (theta_minus == theta_plus)
    throw std::invalid_argument("find_alpha_bar_general: endpoints coincide");
  if (theta_plus < theta_minus) std::swap(theta_minus, theta_plus);  // time reversal

  auto [ut, tm, tp, h] = conformal_reduce(u, theta_minus, theta_plus);
  if (h == 0) {
    ThresholdResult res = find_alpha_bar(u, theta_minus, theta_plus, tol, opts);
    res.winding_h = 0;
    return res;
  }

  const int beta = h + 1;
  ThresholdResult base = find_alpha_bar(ut, tm, tp, tol * beta, opts);
  ThresholdResult res;
  res.status = base.status;
  res.winding_h = h;
  res.iterations = base.iterations;
  res.lemma_bounds = lemma22_bounds(u, theta_minus, theta_plus);
  auto lift = [beta](double a) { return 2.0 - (2.0 - a) / beta; };
  res.bracket = {lift(base.bracket.first), lift(base.bracket.second)};
  res.gap_at_bracket = base.gap_at_bracket;
  if (base.found()) {
    res.alpha_bar = lift(base.alpha_bar);
    res.reduced = ReducedProblem{ut, tm, tp, base.alpha_bar};
  } else {
    res.reduced = ReducedProblem{ut, tm, tp, 0.0};
  }
  return res;
}

}  // namespace parab
