#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "parab/manifolds.hpp"
#include "parab/phase_plane.hpp"
#include "parab/trig_poly.hpp"
#include "parab/util.hpp"

namespace parab {

struct TrajectorySample {
  double t;
  double r;
  double theta;
};

namespace detail {

/// Fornberg finite-difference weights: derivative of given order at x0 from
/// arbitrary nodes x (exact for polynomials up to degree x.size()-1).
inline std::vector<double> fd_weights(std::span<const double> x, double x0, int order) {
  const int n = static_cast<int>(x.size());
  std::vector<double> c(static_cast<std::size_t>(n) * (order + 1), 0.0);
  auto C = [&](int i, int m) -> double& { return c[static_cast<std::size_t>(i) * (order + 1) + m]; };
  double c1 = 1.0;
  double c4 = x[0] - x0;
  C(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int m = mn; m >= 1; --m)
          C(i, m) = c1 * (m * C(i - 1, m - 1) - c5 * C(i - 1, m)) / c2;
        C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
      }
      for (int m = mn; m >= 1; --m) C(j, m) = (c4 * C(j, m) - m * C(j, m - 1)) / c3;
      C(j, 0) = c4 * C(j, 0) / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = C(i, order);
  return w;
}

struct RawSample {
  double tau;
  double theta;
  double phi;
  double log_r;
  double t;
};

enum class ArcStop { pericenter, theta_cut };

struct PhysicalBranchSpec {
  double saddle_theta = 0.0;
  double delta_signed = 1e-7;  // seed offset along (1, v2); sign picks the branch
  ArcStop stop = ArcStop::pericenter;
  double theta_cut = 0.0;
  double step_tau = 2e-3;
  long max_samples = 4'000'000;
};

/// Fixed-step RK4 sampling of one manifold branch carrying (theta, phi,
/// log r, t). log r rather than r: the radial factor spans orders of
/// magnitude and the log form keeps relative accuracy uniform. On return the
/// samples are normalized to r = 1 and t = 0 at the stop point.
inline std::vector<RawSample> physical_branch(const TrigPolynomial& u, double alpha,
                                              const PhysicalBranchSpec& spec) {
  const SaddleLinearization lin = linearize_saddle(u, alpha, spec.saddle_theta, 1);
  auto field = [&u, alpha](double, const StateN<4>& y, StateN<4>& dy) {
    const Jet2 j = u.jet(y[0]);
    const double sd = std::sin(y[1] - y[0]);
    const double cd = std::cos(y[1] - y[0]);
    dy[0] = 2.0 * j.value * sd;
    dy[1] = j.d1 * cd + alpha * j.value * sd;
    dy[2] = 2.0 * j.value * cd;
    dy[3] = std::sqrt(2.0 * j.value) * std::exp(y[2] * (1.0 + 0.5 * alpha));
  };

  StateN<4> y{spec.saddle_theta + spec.delta_signed,
              spec.saddle_theta + kPi + spec.delta_signed * lin.v2, 0.0, 0.0};

  auto stop_fn = [&](const StateN<4>& s) {
    if (spec.stop == ArcStop::pericenter) return v_value(u, {s[0], s[1]});
    const double dir = spec.delta_signed > 0.0 ? 1.0 : -1.0;
    return dir * (s[0] - spec.theta_cut);
  };

  const double sweep_guard = kTwoPi / (2.0 - alpha) + 0.5;
  std::vector<RawSample> raw;
  raw.push_back({0.0, y[0], y[1], y[2], y[3]});
  double tau = 0.0;
  if (stop_fn(y) >= 0.0)
    throw NumericalError("physical_branch: stop condition already met at the seed");

  while (true) {
    if (static_cast<long>(raw.size()) > spec.max_samples)
      throw NumericalError("physical_branch: sample budget exhausted");
    StateN<4> ynext = rk4_step(field, tau, y, spec.step_tau);
    const double g = stop_fn(ynext);
    if (g >= 0.0) {
      // partial final step: bisection on the substep length
      double lo = 0.0, hi = spec.step_tau;
      StateN<4> yhit = ynext;
      for (int it = 0; it < 64 && (hi - lo) > 1e-16 * spec.step_tau; ++it) {
        const double mid = 0.5 * (lo + hi);
        const StateN<4> ym = rk4_step(field, tau, y, mid);
        if (stop_fn(ym) >= 0.0) {
          hi = mid;
          yhit = ym;
        } else {
          lo = mid;
        }
      }
      raw.push_back({tau + hi, yhit[0], yhit[1], yhit[2], yhit[3]});
      break;
    }
    if (std::abs(ynext[0] - spec.saddle_theta) > sweep_guard)
      throw NumericalError("physical_branch: left the sweep region without stopping");
    tau += spec.step_tau;
    y = ynext;
    raw.push_back({tau, y[0], y[1], y[2], y[3]});
  }

  // normalize the homothety class: r = 1, t = 0 at the stop point
  const double log_r_stop = raw.back().log_r;
  const double t_stop = raw.back().t;
  const double t_scale = std::exp(-log_r_stop * (1.0 + 0.5 * alpha));
  for (auto& s : raw) {
    s.log_r -= log_r_stop;
    s.t = (s.t - t_stop) * t_scale;
  }
  return raw;
}

}  // namespace detail

/// One reconstructed parabolic arc: time-parameterized physical samples from
/// the truncation radius down to the junction (incoming) or up from it
/// (outgoing), with the finite-difference energy residual of the samples.
struct TrajectoryArc {
  std::vector<TrajectorySample> samples;  // t increasing
  std::vector<double> energy_residual;    // NaN where the FD stencil does not fit
  double energy_residual_sup = 0.0;
  double asymptote_theta = 0.0;
  double truncation_radius = 0.0;
  bool reached_r_max = false;
};

struct ReconstructOptions {
  double r_max = 1e4;
  double step_tau = 2e-3;
  double match_tol = 1e-5;        // |theta_hat- - theta_hat+| for a matched orbit
  double seed_offset_cap = 1e-7;  // auto-shrunk so the arc reaches r_max
};

namespace detail {

inline double auto_delta(const TrigPolynomial& u, double alpha, double saddle_theta,
                         const ReconstructOptions& opts) {
  // near the saddle r grows ~ (1/delta)^(2/lambda_hat) along the branch
  const double lam = linearize_saddle(u, alpha, saddle_theta, 1).lambda;
  const double want = std::pow(10.0 * opts.r_max, -0.5 * lam);
  return std::clamp(want, 1e-12, opts.seed_offset_cap);
}

/// Converts a raw branch into a physical arc. flip_time reverses the arc
/// (used for the outgoing side, computed via the reversal symmetry).
inline TrajectoryArc finish_arc(const TrigPolynomial& u, double alpha,
                                std::vector<RawSample> raw, bool flip_time,
                                double saddle_theta, const ReconstructOptions& opts) {
  const std::size_t n = raw.size();
  std::vector<double> resid(n, std::numeric_limits<double>::quiet_NaN());
  double sup = 0.0;
  if (n >= 5) {
    std::vector<double> tau(n), rr(n), th(n), tt(n);
    for (std::size_t i = 0; i < n; ++i) {
      tau[i] = raw[i].tau;
      rr[i] = std::exp(raw[i].log_r);
      th[i] = raw[i].theta;
      tt[i] = raw[i].t;
    }
    for (std::size_t i = 2; i + 2 < n; ++i) {
      const auto w = fd_weights(std::span<const double>(&tau[i - 2], 5), tau[i], 1);
      double dr = 0.0, dth = 0.0, dt = 0.0;
      for (int k = 0; k < 5; ++k) {
        dr += w[k] * rr[i - 2 + k];
        dth += w[k] * th[i - 2 + k];
        dt += w[k] * tt[i - 2 + k];
      }
      const double rdot = dr / dt;
      const double thdot = dth / dt;
      const double e =
          0.5 * (rdot * rdot + rr[i] * rr[i] * thdot * thdot) - u(th[i]) / std::pow(rr[i], alpha);
      resid[i] = std::abs(e);
      sup = std::max(sup, resid[i]);
    }
  }

  TrajectoryArc arc;
  arc.asymptote_theta = saddle_theta;
  arc.energy_residual_sup = sup;
  arc.samples.reserve(n);
  arc.energy_residual.reserve(n);
  const double top_r = std::exp(raw.front().log_r);
  arc.reached_r_max = top_r >= 0.999 * opts.r_max;
  arc.truncation_radius = std::min(top_r, opts.r_max);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::exp(raw[i].log_r);
    if (r > opts.r_max) continue;  // truncate physical-time output at r_max
    const double t = flip_time ? -raw[i].t : raw[i].t;
    arc.samples.push_back({t, r, raw[i].theta});
    arc.energy_residual.push_back(resid[i]);
  }
  if (flip_time) {
    std::reverse(arc.samples.begin(), arc.samples.end());
    std::reverse(arc.energy_residual.begin(), arc.energy_residual.end());
  }
  return arc;
}

}  // namespace detail

/// Zero-energy trajectory between the asymptotic configurations, normalized to
/// r = 1, t = 0 at the pericenter (the canonical homothety representative).
struct ParabolicTrajectory {
  double alpha = 0.0;
  std::vector<TrajectorySample> samples;
  std::vector<double> energy_residual;
  std::pair<double, double> asymptotes{0.0, 0.0};
  std::size_t pericenter_index = 0;
  double energy_residual_sup = 0.0;
  double min_radius = 0.0;
  bool reached_r_max_in = false;
  bool reached_r_max_out = false;
};

namespace detail {

inline ParabolicTrajectory merge_arcs(double alpha, const TrajectoryArc& incoming,
                                      const TrajectoryArc& outgoing) {
  ParabolicTrajectory traj;
  traj.alpha = alpha;
  traj.asymptotes = {incoming.asymptote_theta, outgoing.asymptote_theta};
  traj.samples = incoming.samples;
  traj.energy_residual = incoming.energy_residual;
  traj.pericenter_index = traj.samples.empty() ? 0 : traj.samples.size() - 1;
  for (std::size_t i = 1; i < outgoing.samples.size(); ++i) {
    traj.samples.push_back(outgoing.samples[i]);
    traj.energy_residual.push_back(outgoing.energy_residual[i]);
  }
  traj.energy_residual_sup =
      std::max(incoming.energy_residual_sup, outgoing.energy_residual_sup);
  traj.min_radius = 1e300;
  for (const auto& s : traj.samples) traj.min_radius = std::min(traj.min_radius, s.r);
  traj.reached_r_max_in = incoming.reached_r_max;
  traj.reached_r_max_out = outgoing.reached_r_max;
  return traj;
}

}  // namespace detail

/// Reconstructs the physical trajectory of a matched heteroclinic (gap ~ 0 at
/// this alpha). The branch pair vouches for the matching; both arcs are
/// re-sampled at a fixed step and joined at the common pericenter.
inline ParabolicTrajectory reconstruct(const TrigPolynomial& u, double alpha,
                                       const ApsidalResult& unstable,
                                       const ApsidalResult& stable,
                                       const ReconstructOptions& opts = {}) {
  if (unstable.branch != +1 || stable.branch != -1)
    throw std::invalid_argument("reconstruct: pass (unstable, stable) branch results");
  if (std::abs(unstable.theta_hat - stable.theta_hat) > opts.match_tol)
    throw NumericalError("reconstruct: orbit is not matched at this alpha");

  detail::PhysicalBranchSpec in_spec;
  in_spec.saddle_theta = unstable.theta_base;
  in_spec.delta_signed = detail::auto_delta(u, alpha, unstable.theta_base, opts);
  in_spec.step_tau = opts.step_tau;
  auto in_raw = detail::physical_branch(u, alpha, in_spec);

  detail::PhysicalBranchSpec out_spec;
  out_spec.saddle_theta = stable.theta_base;
  out_spec.delta_signed = -detail::auto_delta(u, alpha, stable.theta_base, opts);
  out_spec.step_tau = opts.step_tau;
  auto out_raw = detail::physical_branch(u, alpha, out_spec);

  const auto incoming = detail::finish_arc(u, alpha, std::move(in_raw), false,
                                           unstable.theta_base, opts);
  const auto outgoing = detail::finish_arc(u, alpha, std::move(out_raw), true,
                                           stable.theta_base, opts);
  return detail::merge_arcs(alpha, incoming, outgoing);
}

/// Junction angle of a velocity-jumping minimizer: the unique root of
/// psi(theta) = phi_+(theta) + phi_-(theta) - 2 theta - pi on
/// (theta_hat_plus, theta_hat_minus).
struct PsiRoot {
  double theta0 = 0.0;
  double residual = 0.0;
  double dpsi = 0.0;  // psi'(theta0), negative at the root
};

struct PsiFunction {
  PhiGraph minus;  // unstable branch graph
  PhiGraph plus;   // stable branch graph
  double lo = 0.0, hi = 0.0;

  double operator()(double th) const { return plus.eval(th) + minus.eval(th) - 2.0 * th - kPi; }

  double derivative(const TrigPolynomial& u, double alpha, double th) const {
    const Jet2 j = u.jet(th);
    const double dp = plus.eval(th) - th;
    const double dm = minus.eval(th) - th;
    return alpha - 2.0 +
           j.d1 / (2.0 * j.value) * (std::cos(dp) / std::sin(dp) + std::cos(dm) / std::sin(dm));
  }
};

inline PsiFunction make_psi(const TrigPolynomial& u, double alpha,
                            const ApsidalResult& unstable, const ApsidalResult& stable) {
  PsiFunction psi;
  psi.minus = graph_phi_of_theta(u, alpha, unstable);
  psi.plus = graph_phi_of_theta(u, alpha, stable);
  psi.lo = std::max(stable.theta_hat, psi.plus.theta_lo());
  psi.hi = std::min({unstable.theta_hat, psi.plus.theta_hi(), psi.minus.theta_hi()});
  if (!(psi.lo < psi.hi))
    throw NumericalError("make_psi: empty junction interval (gap must be positive)");
  return psi;
}

inline PsiRoot find_velocity_jump_angle(const TrigPolynomial& u, double alpha,
                                        const PsiFunction& psi, double tol = 1e-12) {
  const double pad = 1e-9 * (1.0 + std::abs(psi.hi));
  double lo = psi.lo + pad, hi = psi.hi - pad;
  double flo = psi(lo), fhi = psi(hi);
  if (!(flo > 0.0 && fhi < 0.0))
    throw NumericalError("find_velocity_jump_angle: psi root not bracketed");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = psi(mid);
    if (fm > 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  PsiRoot root;
  root.theta0 = 0.5 * (lo + hi);
  root.residual = std::abs(psi(root.theta0));
  root.dpsi = psi.derivative(u, alpha, root.theta0);
  return root;
}

enum class MinimizerKind { smooth, position_jump, velocity_jump };

inline const char* to_string(MinimizerKind k) {
  switch (k) {
    case MinimizerKind::smooth: return "smooth";
    case MinimizerKind::position_jump: return "position_jump";
    case MinimizerKind::velocity_jump: return "velocity_jump";
  }
  return "?";
}

/// Morse minimizer constrained to min r = 1, classified by the sign of the
/// apsidal gap: position jump (gap < 0, circular arc on r = 1), velocity jump
/// (gap > 0, symmetric kink at theta0), or a genuine smooth parabolic
/// trajectory at the threshold.
struct ConstrainedMinimizer {
  MinimizerKind kind = MinimizerKind::smooth;
  double delta_pos = 0.0;
  double delta_vel = 0.0;
  std::optional<double> theta0;
  double gap = 0.0;
  TrajectoryArc incoming;
  std::vector<TrajectorySample> circular_arc;  // r = 1, position-jump case only
  TrajectoryArc outgoing;
  ApsidalResult apsidal_minus;
  ApsidalResult apsidal_plus;
  std::optional<PsiRoot> psi_root;

  ParabolicTrajectory merged(double alpha) const {
    if (circular_arc.empty()) return detail::merge_arcs(alpha, incoming, outgoing);
    ParabolicTrajectory traj = detail::merge_arcs(alpha, incoming, outgoing);
    // splice the circular arc between the halves
    traj.samples = incoming.samples;
    traj.energy_residual = incoming.energy_residual;
    for (std::size_t i = 1; i < circular_arc.size(); ++i) {
      traj.samples.push_back(circular_arc[i]);
      traj.energy_residual.push_back(0.0);  // exact zero-energy circular motion
    }
    traj.pericenter_index = traj.samples.size() - 1;
    for (std::size_t i = 1; i < outgoing.samples.size(); ++i) {
      traj.samples.push_back(outgoing.samples[i]);
      traj.energy_residual.push_back(outgoing.energy_residual[i]);
    }
    return traj;
  }
};

struct ConstrainedOptions {
  ApsidalOptions apsidal{.dense = true};
  ReconstructOptions recon{};
  double smooth_tol = 1e-6;  // |gap| below this is the threshold case
  double psi_tol = 1e-12;
};

inline ConstrainedMinimizer constrained_minimizer(const TrigPolynomial& u, double alpha,
                                                  double theta_minus, double theta_plus,
                                                  const ConstrainedOptions& opts = {}) {
  ConstrainedMinimizer m;
  m.apsidal_minus = unstable_apsidal(u, alpha, theta_minus, opts.apsidal);
  m.apsidal_plus = stable_apsidal(u, alpha, theta_plus, opts.apsidal);
  m.gap = m.apsidal_minus.theta_hat - m.apsidal_plus.theta_hat;

  detail::PhysicalBranchSpec in_spec;
  in_spec.saddle_theta = theta_minus;
  in_spec.delta_signed = detail::auto_delta(u, alpha, theta_minus, opts.recon);
  in_spec.step_tau = opts.recon.step_tau;
  detail::PhysicalBranchSpec out_spec;
  out_spec.saddle_theta = theta_plus;
  out_spec.delta_signed = -detail::auto_delta(u, alpha, theta_plus, opts.recon);
  out_spec.step_tau = opts.recon.step_tau;

  if (std::abs(m.gap) <= opts.smooth_tol) {
    m.kind = MinimizerKind::smooth;
  } else if (m.gap < 0.0) {
    m.kind = MinimizerKind::position_jump;
    m.delta_pos = -m.gap;  // theta_hat_plus - theta_hat_minus
  } else {
    m.kind = MinimizerKind::velocity_jump;
    const auto psi = make_psi(u, alpha, m.apsidal_minus, m.apsidal_plus);
    m.psi_root = find_velocity_jump_angle(u, alpha, psi, opts.psi_tol);
    m.theta0 = m.psi_root->theta0;
    const double th0 = m.psi_root->theta0;
    m.delta_vel = 2.0 * std::sqrt(2.0 * u(th0)) * std::cos(psi.plus.eval(th0) - th0);
    in_spec.stop = detail::ArcStop::theta_cut;
    in_spec.theta_cut = th0;
    out_spec.stop = detail::ArcStop::theta_cut;
    out_spec.theta_cut = th0;
  }

  m.incoming = detail::finish_arc(u, alpha, detail::physical_branch(u, alpha, in_spec), false,
                                  theta_minus, opts.recon);
  m.outgoing = detail::finish_arc(u, alpha, detail::physical_branch(u, alpha, out_spec), true,
                                  theta_plus, opts.recon);

  if (m.kind == MinimizerKind::position_jump) {
    // zero-energy circular arc on r = 1: theta' = sqrt(2U(theta)),
    // t by Simpson quadrature of dtheta/sqrt(2U)
    const double a = m.apsidal_minus.theta_hat;
    const double b = m.apsidal_plus.theta_hat;
    const std::size_t n = std::max<std::size_t>(8, static_cast<std::size_t>((b - a) / 1e-3));
    const std::size_t nn = n + (n % 2);  // even interval count for Simpson
    std::vector<TrajectorySample> circ(nn + 1);
    double t = 0.0;
    auto speed_inv = [&](double th) { return 1.0 / std::sqrt(2.0 * u(th)); };
    const double h = (b - a) / nn;
    circ[0] = {0.0, 1.0, a};
    for (std::size_t i = 1; i <= nn; ++i) {
      const double th_prev = a + (i - 1) * h;
      const double th = a + i * h;
      t += h / 6.0 * (speed_inv(th_prev) + 4.0 * speed_inv(0.5 * (th_prev + th)) + speed_inv(th));
      circ[i] = {t, 1.0, th};
    }
    m.circular_arc = std::move(circ);
    const double t_shift = m.circular_arc.back().t;
    for (auto& s : m.outgoing.samples) s.t += t_shift;
  }
  return m;
}

/// One-sided derivative of r(t) at the junction end of an arc (5-point
/// polynomial stencil on the actual sample times).
inline double arc_rdot_at_junction(const TrajectoryArc& arc, bool junction_is_last) {
  const auto& s = arc.samples;
  if (s.size() < 5) throw std::invalid_argument("arc_rdot_at_junction: too few samples");
  std::array<double, 5> tt, rr;
  if (junction_is_last) {
    for (int k = 0; k < 5; ++k) {
      tt[k] = s[s.size() - 5 + k].t;
      rr[k] = s[s.size() - 5 + k].r;
    }
  } else {
    for (int k = 0; k < 5; ++k) {
      tt[k] = s[k].t;
      rr[k] = s[k].r;
    }
  }
  const auto w = detail::fd_weights(std::span<const double>(tt.data(), 5),
                                    junction_is_last ? tt[4] : tt[0], 1);
  double d = 0.0;
  for (int k = 0; k < 5; ++k) d += w[k] * rr[k];
  return d;
}

struct ParabolicCheckReport {
  bool pass = false;
  double min_radius = 0.0;
  double asymptote_err_minus = 0.0;
  double asymptote_err_plus = 0.0;
  double energy_residual_sup = 0.0;
  double c1_jump = 0.0;  // |rdot(0+) - rdot(0-)| at the pericenter index
  bool finite_window_caveat = false;
  std::string notes;
};

struct CheckOptions {
  double angle_tol = 5e-2;   // asymptote mismatch allowed at the truncation radius
  double energy_tol = 1e-6;
  double c1_tol = 1e-3;
};

/// Report-only check of the defining properties: positive minimum radius,
/// asymptotic angles near the targets at truncation, energy residual, and C1
/// continuity across the junction (velocity-jump inputs fail that clause).
inline ParabolicCheckReport check_parabolic_definition(const ParabolicTrajectory& x,
                                                       const CheckOptions& opts = {}) {
  ParabolicCheckReport rep;
  rep.min_radius = x.min_radius;
  rep.energy_residual_sup = x.energy_residual_sup;
  rep.asymptote_err_minus = std::abs(x.samples.front().theta - x.asymptotes.first);
  rep.asymptote_err_plus = std::abs(x.samples.back().theta - x.asymptotes.second);
  rep.finite_window_caveat = !(x.reached_r_max_in && x.reached_r_max_out);

  const std::size_t p = x.pericenter_index;
  if (p >= 4 && p + 4 < x.samples.size()) {
    std::array<double, 5> tt, rr;
    for (int k = 0; k < 5; ++k) {
      tt[k] = x.samples[p - 4 + k].t;
      rr[k] = x.samples[p - 4 + k].r;
    }
    auto w = detail::fd_weights(std::span<const double>(tt.data(), 5), tt[4], 1);
    double dminus = 0.0;
    for (int k = 0; k < 5; ++k) dminus += w[k] * rr[k];
    for (int k = 0; k < 5; ++k) {
      tt[k] = x.samples[p + k].t;
      rr[k] = x.samples[p + k].r;
    }
    w = detail::fd_weights(std::span<const double>(tt.data(), 5), tt[0], 1);
    double dplus = 0.0;
    for (int k = 0; k < 5; ++k) dplus += w[k] * rr[k];
    rep.c1_jump = std::abs(dplus - dminus);
  }

  rep.pass = rep.min_radius > 0.0 && rep.asymptote_err_minus < opts.angle_tol &&
             rep.asymptote_err_plus < opts.angle_tol &&
             rep.energy_residual_sup < opts.energy_tol && rep.c1_jump < opts.c1_tol;
  if (rep.finite_window_caveat)
    rep.notes = "finite window: arcs truncated before reaching r_max";
  return rep;
}

}  // namespace parab
