#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "parab/util.hpp"

namespace parab {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.1;
  long max_steps = 1'000'000;
  double event_tol_tau = 1e-10;  // event abscissa localization target
};

template <std::size_t N>
using StateN = std::array<double, N>;

template <std::size_t N>
struct StepRecord {
  double tau;
  StateN<N> y;
};

template <std::size_t N>
struct EventHit {
  double tau;
  StateN<N> y;
  int event_index;
};

template <std::size_t N>
using EventFn = std::function<double(double, const StateN<N>&)>;

template <std::size_t N>
struct EventSpec {
  EventFn<N> fn;
  bool terminal = true;
};

template <std::size_t N>
struct IntegrationResult {
  std::vector<StepRecord<N>> polyline;  // accepted steps, endpoints included
  std::vector<EventHit<N>> events;
  bool terminated_by_event = false;
  int terminal_event = -1;
  long n_steps = 0;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
inline constexpr double dp_e[7] = {
    71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920, -17253.0 / 339200, 22.0 / 525, -1.0 / 40};
// Continuous-extension weights (order 4 interpolant).
inline constexpr double dp_d[7] = {
    -12715105075.0 / 11282082432.0, 0.0,
    87487479700.0 / 32700410799.0,  -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0, -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0};

/// Quartic dense output over one accepted step, evaluated at fraction sigma.
template <std::size_t N>
struct DenseSegment {
  double tau0 = 0.0, h = 0.0;
  StateN<N> r1{}, r2{}, r3{}, r4{}, r5{};

  StateN<N> eval(double tau) const {
    const double s = (tau - tau0) / h;
    const double s1 = 1.0 - s;
    StateN<N> y;
    for (std::size_t i = 0; i < N; ++i)
      y[i] = r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i])));
    return y;
  }
};

}  // namespace detail

/// Adaptive embedded RK 5(4) with dense output. Scalar event functions are
/// bracketed on each accepted step and localized on the interpolant by
/// bisection; terminal events stop the run at the hit. tau1 < tau0 integrates
/// backward. Throws NumericalError on step underflow or max_steps.
template <std::size_t N, class Field>
IntegrationResult<N> integrate(Field&& field, StateN<N> y0, double tau0, double tau1,
                               const IntegratorConfig& cfg,
                               std::span<const EventSpec<N>> events = {}) {
  IntegrationResult<N> res;
  const double dir = tau1 >= tau0 ? 1.0 : -1.0;
  const double span = std::abs(tau1 - tau0);
  if (span == 0.0) {
    res.polyline.push_back({tau0, y0});
    return res;
  }

  std::array<StateN<N>, 7> k;
  StateN<N> y = y0;
  double tau = tau0;
  field(tau, y, k[0]);  // FSAL slot

  std::vector<double> g_prev(events.size());
  for (std::size_t e = 0; e < events.size(); ++e) g_prev[e] = events[e].fn(tau, y);

  double h = dir * std::min(cfg.max_step, std::max(span * 1e-4, 1e-8));
  const double hmin = span * 1e-15;

  res.polyline.push_back({tau, y});

  while (dir * (tau1 - tau) > 0.0) {
    if (res.n_steps++ > cfg.max_steps)
      throw NumericalError("integrate: max_steps exceeded");
    if (std::abs(h) < hmin) throw NumericalError("integrate: step underflow");
    if (dir * (tau + h - tau1) > 0.0) h = tau1 - tau;

    StateN<N> ytmp, ynew, yerr;
    for (int stage = 1; stage < 7; ++stage) {
      for (std::size_t i = 0; i < N; ++i) {
        double acc = 0.0;
        for (int j = 0; j < stage; ++j) acc += detail::dp_a[stage][j] * k[j][i];
        ytmp[i] = y[i] + h * acc;
      }
      field(tau + detail::dp_c[stage] * h, ytmp, k[stage]);
    }
    ynew = ytmp;  // stage 6 abscissa is tau+h with the 5th-order weights

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double eacc = 0.0;
      for (int j = 0; j < 7; ++j) eacc += detail::dp_e[j] * k[j][i];
      yerr[i] = h * eacc;
      const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double q = yerr[i] / sc;
      err += q * q;
    }
    err = std::sqrt(err / N);

    if (err > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      continue;
    }

    // Accepted: build dense segment, then look for event crossings inside it.
    detail::DenseSegment<N> seg;
    seg.tau0 = tau;
    seg.h = h;
    for (std::size_t i = 0; i < N; ++i) {
      const double ydiff = ynew[i] - y[i];
      const double bspl = h * k[0][i] - ydiff;
      double dsum = 0.0;
      for (int j = 0; j < 7; ++j) dsum += detail::dp_d[j] * k[j][i];
      seg.r1[i] = y[i];
      seg.r2[i] = ydiff;
      seg.r3[i] = bspl;
      seg.r4[i] = ydiff - h * k[6][i] - bspl;
      seg.r5[i] = h * dsum;
    }

    bool stop = false;
    double stop_tau = tau + h;
    StateN<N> stop_y = ynew;
    for (std::size_t e = 0; e < events.size(); ++e) {
      const double g1 = events[e].fn(tau + h, ynew);
      const double g0 = g_prev[e];
      const bool crossed = (g0 < 0.0 && g1 >= 0.0) || (g0 > 0.0 && g1 <= 0.0);
      if (!crossed) {
        g_prev[e] = g1;
        continue;
      }
      // bisection on the dense interpolant
      double a = tau, b = tau + h, ga = g0;
      while (std::abs(b - a) > cfg.event_tol_tau * std::max(1.0, std::abs(tau))) {
        const double m = 0.5 * (a + b);
        const double gm = events[e].fn(m, seg.eval(m));
        if (gm == 0.0) {
          a = b = m;
          break;
        }
        if ((ga < 0.0) == (gm < 0.0)) {
          a = m;
          ga = gm;
        } else {
          b = m;
        }
      }
      const double te = 0.5 * (a + b);
      EventHit<N> hit{te, seg.eval(te), static_cast<int>(e)};
      res.events.push_back(hit);
      if (events[e].terminal && (!stop || dir * (te - stop_tau) < 0.0)) {
        stop = true;
        stop_tau = te;
        stop_y = hit.y;
        res.terminal_event = static_cast<int>(e);
      }
      g_prev[e] = g1;
    }

    if (stop) {
      res.polyline.push_back({stop_tau, stop_y});
      res.terminated_by_event = true;
      return res;
    }

    tau += h;
    y = ynew;
    k[0] = k[6];  // FSAL
    res.polyline.push_back({tau, y});
    const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::min(5.0, std::max(0.2, grow));
    if (std::abs(h) > cfg.max_step) h = dir * cfg.max_step;
  }
  return res;
}

/// One classical RK4 step; used by the fixed-step trajectory sampler.
template <std::size_t N, class Field>
StateN<N> rk4_step(Field&& field, double tau, const StateN<N>& y, double h) {
  StateN<N> k1, k2, k3, k4, tmp;
  field(tau, y, k1);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  field(tau + 0.5 * h, tmp, k2);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  field(tau + 0.5 * h, tmp, k3);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
  field(tau + h, tmp, k4);
  StateN<N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

}  // namespace parab
