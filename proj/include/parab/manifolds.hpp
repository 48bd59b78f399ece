#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "parab/integrate.hpp"
#include "parab/phase_plane.hpp"
#include "parab/trig_poly.hpp"
#include "parab/util.hpp"

namespace parab {

struct ApsidalOptions {
  IntegratorConfig integ{};
  double seed_offset_scale = 1e-7;  // delta = scale * max(1, |theta_base|)
  double guard_margin = 0.5;        // failure beyond theta_base +- (2pi/(2-alpha) + margin)
  bool dense = false;               // cap steps so the polyline resolves theta finely
  double dense_theta_step = 0.01;
  bool error_estimate = true;       // re-run at delta/2 for the Richardson difference
};

/// First crossing of an invariant-manifold branch with the pericenter line
/// phi = theta + pi/2. The polyline is the branch from the seed to the
/// crossing, theta strictly monotone throughout.
struct ApsidalResult {
  double alpha = 0.0;
  double theta_base = 0.0;  // the saddle angle the branch emanates from / enters
  double theta_hat = 0.0;
  PhaseState crossing{};
  std::vector<StepRecord<2>> polyline;
  double err_estimate = 0.0;
  double seed_offset = 0.0;
  int branch = +1;  // +1 unstable (from theta_minus), -1 stable (into theta_plus)
};

namespace detail {

struct BranchRun {
  double theta_hat;
  PhaseState crossing;
  std::vector<StepRecord<2>> polyline;
};

/// Integrates the branch seeded at (theta*, theta*+pi) + sign*delta*(1, v2)
/// until the first v = 0 crossing. The guard event converts a missing
/// crossing (which monotone v rules out analytically) into a hard error.
inline BranchRun run_branch(const TrigPolynomial& u, double alpha, double theta_star,
                            double delta_signed, const ApsidalOptions& opts) {
  const SaddleLinearization lin = linearize_saddle(u, alpha, theta_star, 1);
  const StateN<2> seed{theta_star + delta_signed, theta_star + kPi + delta_signed * lin.v2};

  auto field = [&u, alpha](double, const StateN<2>& y, StateN<2>& dy) {
    const auto d = vector_field(u, alpha, {y[0], y[1]});
    dy = {d.dtheta, d.dphi};
  };

  const double sweep_bound = kTwoPi / (2.0 - alpha) + opts.guard_margin;
  const double dir = delta_signed > 0.0 ? 1.0 : -1.0;
  std::vector<EventSpec<2>> events;
  events.push_back({[&u](double, const StateN<2>& y) {
                      return v_value(u, {y[0], y[1]});
                    },
                    true});
  events.push_back({[theta_star, sweep_bound, dir](double, const StateN<2>& y) {
                      return dir * (y[0] - theta_star) - sweep_bound;
                    },
                    true});

  IntegratorConfig cfg = opts.integ;
  if (opts.dense) {
    const double u_max = potential_range(u).second;
    cfg.max_step = std::min(cfg.max_step, opts.dense_theta_step / (2.0 * u_max));
  }
  // generous horizon; the crossing or the guard terminates the run
  const double horizon = 64.0 * (1.0 + sweep_bound) / (2.0 - alpha) + 1e4;

  auto res = integrate<2>(field, seed, 0.0, horizon, cfg, events);
  if (!res.terminated_by_event || res.terminal_event != 0)
    throw NumericalError("apsidal branch: no pericenter crossing before the sweep guard");

  BranchRun out;
  out.crossing = {res.polyline.back().y[0], res.polyline.back().y[1]};
  out.theta_hat = out.crossing.theta;
  out.polyline = std::move(res.polyline);
  return out;
}

}  // namespace detail

/// Apsidal angle of the unstable branch leaving the saddle (theta-, theta-+pi)
/// with increasing theta. theta- must be a nondegenerate minimum of U.
inline ApsidalResult unstable_apsidal(const TrigPolynomial& u, double alpha,
                                      double theta_minus, const ApsidalOptions& opts = {}) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("unstable_apsidal: alpha must lie in (0, 2)");
  const double delta = opts.seed_offset_scale * std::max(1.0, std::abs(theta_minus));
  auto run = detail::run_branch(u, alpha, theta_minus, delta, opts);

  ApsidalResult r;
  r.alpha = alpha;
  r.theta_base = theta_minus;
  r.theta_hat = run.theta_hat;
  r.crossing = run.crossing;
  r.polyline = std::move(run.polyline);
  r.seed_offset = delta;
  r.branch = +1;
  if (opts.error_estimate) {
    ApsidalOptions half = opts;
    half.error_estimate = false;
    half.dense = false;
    auto rerun = detail::run_branch(u, alpha, theta_minus, 0.5 * delta, half);
    r.err_estimate = std::max(std::abs(rerun.theta_hat - r.theta_hat), 1e-12);
  } else {
    r.err_estimate = 1e-12;
  }
  return r;
}

/// Apsidal angle of the stable branch entering (theta+, theta+) with
/// increasing theta. Computed through the reversal symmetry
/// (theta(-tau), phi(-tau)+pi): the image branch is the decreasing-theta
/// unstable branch of (theta+, theta+ + pi), so one integration routine
/// serves both manifolds.
inline ApsidalResult stable_apsidal(const TrigPolynomial& u, double alpha,
                                    double theta_plus, const ApsidalOptions& opts = {}) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("stable_apsidal: alpha must lie in (0, 2)");
  const double delta = opts.seed_offset_scale * std::max(1.0, std::abs(theta_plus));
  auto run = detail::run_branch(u, alpha, theta_plus, -delta, opts);

  ApsidalResult r;
  r.alpha = alpha;
  r.theta_base = theta_plus;
  r.theta_hat = run.theta_hat;
  r.seed_offset = delta;
  r.branch = -1;
  // map the computed branch back: (tau, theta, phi) -> (-tau, theta, phi - pi),
  // reversed so tau increases toward the saddle.
  r.polyline.reserve(run.polyline.size());
  for (auto it = run.polyline.rbegin(); it != run.polyline.rend(); ++it)
    r.polyline.push_back({-it->tau, {it->y[0], it->y[1] - kPi}});
  r.crossing = {run.crossing.theta, run.crossing.phi - kPi};
  if (opts.error_estimate) {
    ApsidalOptions half = opts;
    half.error_estimate = false;
    half.dense = false;
    auto rerun = detail::run_branch(u, alpha, theta_plus, -0.5 * delta, half);
    r.err_estimate = std::max(std::abs(rerun.theta_hat - r.theta_hat), 1e-12);
  } else {
    r.err_estimate = 1e-12;
  }
  return r;
}

/// The branch reparameterized as a graph phi(theta): cubic Hermite through the
/// polyline nodes with exact slopes dphi/dtheta = phi'/theta' from the field.
struct PhiGraph {
  std::vector<double> theta;
  std::vector<double> phi;
  std::vector<double> slope;

  double theta_lo() const { return theta.front(); }
  double theta_hi() const { return theta.back(); }

  double eval(double x) const { return hermite(x, false); }
  double deriv(double x) const { return hermite(x, true); }

 private:
  double hermite(double x, bool want_deriv) const {
    const auto it = std::upper_bound(theta.begin(), theta.end(), x);
    std::size_t i = it == theta.begin() ? 0 : static_cast<std::size_t>(it - theta.begin()) - 1;
    if (i + 1 >= theta.size()) i = theta.size() - 2;
    const double h = theta[i + 1] - theta[i];
    const double s = (x - theta[i]) / h;
    const double p0 = phi[i], p1 = phi[i + 1];
    const double m0 = slope[i] * h, m1 = slope[i + 1] * h;
    if (!want_deriv) {
      const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
      const double h10 = s * (1 - s) * (1 - s);
      const double h01 = s * s * (3 - 2 * s);
      const double h11 = s * s * (s - 1);
      return h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1;
    }
    const double d00 = 6 * s * (s - 1);
    const double d10 = (1 - s) * (1 - 3 * s);
    const double d01 = 6 * s * (1 - s);
    const double d11 = s * (3 * s - 2);
    return (d00 * p0 + d10 * m0 + d01 * p1 + d11 * m1) / h;
  }
};

/// Builds the graph over the branch's full monotone theta range; pass a
/// sub-range to restrict. Requires a polyline that is strictly monotone in
/// theta (guaranteed before the first crossing).
inline PhiGraph graph_phi_of_theta(const TrigPolynomial& u, double alpha,
                                   const ApsidalResult& branch,
                                   std::optional<std::pair<double, double>> range = {}) {
  PhiGraph g;
  g.theta.reserve(branch.polyline.size());
  double lo = -1e300, hi = 1e300;
  if (range) {
    lo = range->first;
    hi = range->second;
  }
  double prev = -1e300;
  for (const auto& p : branch.polyline) {
    const double th = p.y[0];
    if (th < lo || th > hi) continue;
    if (th <= prev)
      throw NumericalError("graph_phi_of_theta: polyline is not strictly monotone in theta");
    prev = th;
    const auto d = vector_field(u, alpha, {p.y[0], p.y[1]});
    if (d.dtheta == 0.0)
      throw NumericalError("graph_phi_of_theta: vanishing theta' on the branch");
    g.theta.push_back(th);
    g.phi.push_back(p.y[1]);
    g.slope.push_back(d.dphi / d.dtheta);
  }
  if (g.theta.size() < 2)
    throw NumericalError("graph_phi_of_theta: fewer than two nodes in range");
  return g;
}

/// Max residual of dphi/dtheta = alpha/2 + U'/(2U) cot(phi - theta) over the
/// graph, sampled between nodes; the fraction trimmed at each end avoids the
/// cot singularity at the saddle.
inline double graph_ode_residual(const TrigPolynomial& u, double alpha, const PhiGraph& g,
                                 double trim_fraction = 0.05) {
  const double lo = g.theta_lo() + trim_fraction * (g.theta_hi() - g.theta_lo());
  const double hi = g.theta_hi() - 1e-12;
  double worst = 0.0;
  const int n = 4 * static_cast<int>(g.theta.size());
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const double phi = g.eval(x);
    const Jet2 j = u.jet(x);
    const double rhs = 0.5 * alpha + j.d1 / (2.0 * j.value) * (std::cos(phi - x) / std::sin(phi - x));
    worst = std::max(worst, std::abs(g.deriv(x) - rhs));
  }
  return worst;
}

/// One row of the gap-curve artifact.
struct GapSample {
  double alpha;
  double theta_hat_minus;
  double theta_hat_plus;
  double gap;
  double err;
};

inline GapSample gap_sample(const TrigPolynomial& u, double alpha, double theta_minus,
                            double theta_plus, const ApsidalOptions& opts = {}) {
  const auto um = unstable_apsidal(u, alpha, theta_minus, opts);
  const auto sp = stable_apsidal(u, alpha, theta_plus, opts);
  return {alpha, um.theta_hat, sp.theta_hat, um.theta_hat - sp.theta_hat,
          um.err_estimate + sp.err_estimate};
}

/// Gap curve over an alpha grid; samples are independent and run on the pool.
inline std::vector<GapSample> gap_curve(const TrigPolynomial& u, double theta_minus,
                                        double theta_plus, const std::vector<double>& alphas,
                                        const ApsidalOptions& opts = {}) {
  std::vector<GapSample> out(alphas.size());
  parallel_for(alphas.size(), [&](std::size_t i) {
    out[i] = gap_sample(u, alphas[i], theta_minus, theta_plus, opts);
  });
  return out;
}

}  // namespace parab
