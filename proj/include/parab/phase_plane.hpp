#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "parab/trig_poly.hpp"
#include "parab/util.hpp"

namespace parab {

/// Point of the reduced planar system. Angles live on the universal cover;
/// nothing is taken mod 2pi, the winding analysis needs the lift.
struct PhaseState {
  double theta = 0.0;
  double phi = 0.0;
  double delta() const { return phi - theta; }
};

struct ExtendedState {
  double r = 1.0;
  double theta = 0.0;
  double phi = 0.0;
};

struct PhaseDeriv {
  double dtheta;
  double dphi;
};

struct ExtendedDeriv {
  double dr;
  double dtheta;
  double dphi;
};

/// theta' = 2 U sin(phi-theta),  phi' = U' cos(phi-theta) + alpha U sin(phi-theta).
inline PhaseDeriv vector_field(const TrigPolynomial& u, double alpha, const PhaseState& s) {
  const Jet2 j = u.jet(s.theta);
  const double sd = std::sin(s.delta());
  const double cd = std::cos(s.delta());
  return {2.0 * j.value * sd, j.d1 * cd + alpha * j.value * sd};
}

/// z = sqrt(2U) is always derived from theta, never carried as a state.
inline double z_value(const TrigPolynomial& u, double theta) {
  return std::sqrt(2.0 * u(theta));
}

/// Radial extension r' = 2 r U cos(phi-theta) on top of the planar system.
inline ExtendedDeriv extended_field(const TrigPolynomial& u, double alpha,
                                    const ExtendedState& s) {
  if (!(s.r > 0.0)) throw std::invalid_argument("extended_field: r must be positive");
  const Jet2 j = u.jet(s.theta);
  const double sd = std::sin(s.phi - s.theta);
  const double cd = std::cos(s.phi - s.theta);
  return {2.0 * s.r * j.value * cd, 2.0 * j.value * sd, j.d1 * cd + alpha * j.value * sd};
}

/// v = sqrt(U) cos(phi-theta); non-decreasing along every orbit, and its zero
/// set is the pericenter line phi = theta + pi/2 (mod pi).
inline double v_value(const TrigPolynomial& u, const PhaseState& s) {
  return std::sqrt(u(s.theta)) * std::cos(s.delta());
}

enum class Stability { saddle, sink, source };

inline const char* to_string(Stability s) {
  switch (s) {
    case Stability::saddle: return "saddle";
    case Stability::sink: return "sink";
    case Stability::source: return "source";
  }
  return "?";
}

struct Equilibrium {
  CentralConfiguration base;
  int parity = 0;  // phi* = theta* + parity * pi
  Stability stability = Stability::saddle;
  PhaseState state() const { return {base.angle, base.angle + parity * kPi}; }
};

struct EquilibriaReport {
  std::vector<Equilibrium> equilibria;
  std::vector<std::string> notes;
};

/// Equilibria (theta*, theta* + h pi), h in {0,1}, classified by the sign of
/// U''(theta*): minima are saddles at both parities; maxima are sources at odd
/// parity and sinks at even parity (trace of the linearization is
/// +-(2-alpha) U > 0 resp. < 0). Degenerate configurations are reported in the
/// notes and skipped.
inline EquilibriaReport classify_equilibria(const TrigPolynomial& u,
                                            const RootScanOptions& opts = {}) {
  EquilibriaReport rep;
  if (u.is_constant()) {
    rep.notes.push_back("degenerate line of equilibria: constant potential");
    return rep;
  }
  for (const auto& c : find_central_configurations(u, opts)) {
    if (c.kind == CriticalKind::degenerate) {
      rep.notes.push_back("degenerate central configuration at theta=" + fmt17(c.angle));
      continue;
    }
    for (int parity = 0; parity <= 1; ++parity) {
      Equilibrium e;
      e.base = c;
      e.parity = parity;
      if (c.kind == CriticalKind::minimum)
        e.stability = Stability::saddle;
      else
        e.stability = parity == 1 ? Stability::source : Stability::sink;
      rep.equilibria.push_back(e);
    }
  }
  return rep;
}

/// Eigen-data of the saddle at (theta*, theta* + parity*pi) for a nondegenerate
/// minimum theta*. Normalized by U(theta*): the linearization there is
///   parity 1:  U * [ 2, -2; alpha-mu, -alpha ],   mu = U''/U,
/// whose unstable eigenvalue and eigenvector are
///   lambda_+ = (2-alpha + sqrt((2-alpha)^2+8 mu))/2,   (1, 1-lambda_+/2).
/// For parity 0 the stable eigenpair is returned; the eigenvector component
/// v2 = 1/2 + alpha/4 - sqrt((2-alpha)^2+8 mu)/4 is the same for both.
struct SaddleLinearization {
  double lambda = 0.0;  // eigenvalue of the U-normalized Jacobian
  double v2 = 0.0;      // eigenvector (1, v2)
  std::array<double, 2> direction{1.0, 0.0};  // unit-normalized (1, v2)
};

inline SaddleLinearization linearize_saddle(const TrigPolynomial& u, double alpha,
                                            double theta_star, int parity) {
  const Jet2 j = u.jet(theta_star);
  const double scale = std::max(1.0, std::abs(j.value));
  if (std::abs(j.d1) > 1e-8 * scale)
    throw std::invalid_argument("linearize_saddle: theta_star is not critical");
  if (j.value <= 0.0)
    throw std::invalid_argument("linearize_saddle: U(theta_star) must be positive");
  const double mu = j.d2 / j.value;
  if (mu <= 1e-9)
    throw std::invalid_argument("linearize_saddle: degenerate saddle (U'' <= 0)");
  const double root = std::sqrt((2.0 - alpha) * (2.0 - alpha) + 8.0 * mu);
  SaddleLinearization lin;
  lin.lambda = parity % 2 != 0 ? 0.5 * (2.0 - alpha + root) : 0.5 * (alpha - 2.0 - root);
  lin.v2 = 0.5 + 0.25 * alpha - 0.25 * root;
  const double norm = std::sqrt(1.0 + lin.v2 * lin.v2);
  lin.direction = {1.0 / norm, lin.v2 / norm};
  return lin;
}

}  // namespace parab
