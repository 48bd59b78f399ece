#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "parab/threshold.hpp"
#include "parab/trajectory.hpp"

using namespace parab;
using Catch::Approx;

namespace {

TrigPolynomial two_minus_cos2() { return TrigPolynomial(2.0, {0.0, -1.0}, {}); }
TrigPolynomial near_isotropic(double eps) { return TrigPolynomial(1.0 + eps, {0.0, -eps}, {}); }

struct FullTurn {
  TrigPolynomial u = two_minus_cos2();
  double alpha_bar;
  FullTurn() { alpha_bar = find_alpha_bar(u, 0.0, kTwoPi).alpha_bar; }
};

const FullTurn& full_turn() {
  static FullTurn f;
  return f;
}

}  // namespace

TEST_CASE("reconstructed trajectory at the threshold") {
  const auto& f = full_turn();
  ApsidalOptions aopts;
  const auto um = unstable_apsidal(f.u, f.alpha_bar, 0.0, aopts);
  const auto sp = stable_apsidal(f.u, f.alpha_bar, kTwoPi, aopts);
  const auto traj = reconstruct(f.u, f.alpha_bar, um, sp);

  CHECK(traj.min_radius == Approx(1.0).margin(1e-9));
  CHECK(traj.energy_residual_sup < 1e-6);
  CHECK(traj.reached_r_max_in);
  CHECK(traj.reached_r_max_out);

  // r strictly monotone on each side of the pericenter, t strictly increasing
  const std::size_t p = traj.pericenter_index;
  REQUIRE(p > 10);
  REQUIRE(p + 10 < traj.samples.size());
  for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
    CHECK(traj.samples[i + 1].t > traj.samples[i].t);
    if (i + 1 <= p) CHECK(traj.samples[i + 1].r < traj.samples[i].r);
    if (i >= p) CHECK(traj.samples[i + 1].r > traj.samples[i].r);
  }
  CHECK(traj.samples[p].r == Approx(1.0).margin(1e-12));
  CHECK(traj.samples[p].t == Approx(0.0).margin(1e-12));

  // pericenter: rdot = 0 by the junction stencils
  const auto rep = check_parabolic_definition(traj);
  CHECK(rep.pass);
  CHECK(rep.c1_jump < 1e-5);
  CHECK(rep.asymptote_err_minus < 1e-2);
  CHECK(rep.asymptote_err_plus < 1e-2);
  CHECK_FALSE(rep.finite_window_caveat);
}

TEST_CASE("reconstruct rejects an unmatched pair") {
  const auto& f = full_turn();
  const double off = f.alpha_bar + 0.15;
  const auto um = unstable_apsidal(f.u, off, 0.0);
  const auto sp = stable_apsidal(f.u, off, kTwoPi);
  CHECK_THROWS_AS(reconstruct(f.u, off, um, sp), NumericalError);
}

TEST_CASE("near-isotropic reconstruction approximates the Kepler parabola") {
  const double eps = 1e-3;
  const auto u = near_isotropic(eps);
  const auto thr = find_alpha_bar(u, 0.0, kTwoPi);
  REQUIRE(thr.found());
  const auto um = unstable_apsidal(u, thr.alpha_bar, 0.0);
  const auto sp = stable_apsidal(u, thr.alpha_bar, kTwoPi);
  ReconstructOptions ropts;
  ropts.r_max = 50.0;  // compare on a moderate window
  const auto traj = reconstruct(u, thr.alpha_bar, um, sp, ropts);

  // exact parabola with pericenter 1 and axis theta = pi:
  // r (1 + cos(theta - pi)) = 2
  double worst = 0.0;
  for (const auto& s : traj.samples)
    if (s.r < 20.0)
      worst = std::max(worst, std::abs(s.r * (1.0 + std::cos(s.theta - kPi)) / 2.0 - 1.0));
  CHECK(worst < 2e-2);
}

TEST_CASE("position jump below the threshold") {
  const auto& f = full_turn();
  const double alpha = f.alpha_bar - 0.2;
  const auto m = constrained_minimizer(f.u, alpha, 0.0, kTwoPi);
  CHECK(m.kind == MinimizerKind::position_jump);
  CHECK(m.gap < 0.0);
  CHECK(m.delta_pos == Approx(-m.gap));
  CHECK(m.delta_pos > 0.0);
  CHECK(m.delta_vel == 0.0);
  CHECK_FALSE(m.theta0.has_value());

  // circular arc: r = 1, theta strictly monotone, ends at the apsidal angles
  REQUIRE(m.circular_arc.size() > 2);
  CHECK(m.circular_arc.front().theta == Approx(m.apsidal_minus.theta_hat));
  CHECK(m.circular_arc.back().theta == Approx(m.apsidal_plus.theta_hat));
  for (std::size_t i = 0; i + 1 < m.circular_arc.size(); ++i) {
    CHECK(m.circular_arc[i].r == 1.0);
    CHECK(m.circular_arc[i + 1].theta > m.circular_arc[i].theta);
    CHECK(m.circular_arc[i + 1].t > m.circular_arc[i].t);
  }

  // C1 junctions: rdot vanishes at both ends of the circular arc
  CHECK(std::abs(arc_rdot_at_junction(m.incoming, true)) < 1e-6);
  CHECK(std::abs(arc_rdot_at_junction(m.outgoing, false)) < 1e-6);

  const auto merged = m.merged(alpha);
  CHECK(merged.min_radius == Approx(1.0).margin(1e-12));
  const auto rep = check_parabolic_definition(merged);
  CHECK(rep.c1_jump < 1e-6);
}

TEST_CASE("velocity jump above the threshold") {
  const auto& f = full_turn();
  const double alpha = f.alpha_bar + 0.2;
  const auto m = constrained_minimizer(f.u, alpha, 0.0, kTwoPi);
  CHECK(m.kind == MinimizerKind::velocity_jump);
  CHECK(m.gap > 0.0);
  CHECK(m.delta_pos == 0.0);
  CHECK(m.delta_vel > 0.0);
  REQUIRE(m.theta0.has_value());
  REQUIRE(m.psi_root.has_value());

  // the junction angle is the unique psi root, with negative slope
  CHECK(*m.theta0 > m.apsidal_plus.theta_hat);
  CHECK(*m.theta0 < m.apsidal_minus.theta_hat);
  CHECK(m.psi_root->residual < 1e-10);
  CHECK(m.psi_root->dpsi < 0.0);

  // psi sign structure at the apsidal angles
  const auto psi = make_psi(f.u, alpha, m.apsidal_minus, m.apsidal_plus);
  CHECK(psi(psi.lo + 1e-7) > 0.0);
  CHECK(psi(psi.hi - 1e-7) < 0.0);

  // delta_vel equals the jump of rdot measured from the arcs
  const double fd_jump =
      std::abs(arc_rdot_at_junction(m.outgoing, false) - arc_rdot_at_junction(m.incoming, true));
  CHECK(fd_jump == Approx(m.delta_vel).epsilon(1e-6));

  // arcs join continuously in position at (r, theta) = (1, theta0)
  CHECK(m.incoming.samples.back().r == Approx(1.0).margin(1e-12));
  CHECK(m.outgoing.samples.front().r == Approx(1.0).margin(1e-12));
  CHECK(m.incoming.samples.back().theta == Approx(*m.theta0).margin(1e-9));
  CHECK(m.outgoing.samples.front().theta == Approx(*m.theta0).margin(1e-9));

  // the merged curve is not C1 at the junction (by construction)
  const auto rep = check_parabolic_definition(m.merged(alpha));
  CHECK_FALSE(rep.pass);
  CHECK(rep.c1_jump == Approx(m.delta_vel).epsilon(1e-4));
}

TEST_CASE("smooth minimizer at the threshold") {
  const auto& f = full_turn();
  const auto m = constrained_minimizer(f.u, f.alpha_bar, 0.0, kTwoPi);
  CHECK(m.kind == MinimizerKind::smooth);
  CHECK(m.delta_pos == 0.0);
  CHECK(m.delta_vel == 0.0);
  CHECK(m.circular_arc.empty());
  const auto rep = check_parabolic_definition(m.merged(f.alpha_bar));
  CHECK(rep.pass);
}

TEST_CASE("trichotomy is exclusive on a grid around the threshold") {
  const auto& f = full_turn();
  for (int k = -2; k <= 2; ++k) {
    const double alpha = f.alpha_bar + 0.12 * k;
    const auto m = constrained_minimizer(f.u, alpha, 0.0, kTwoPi);
    const int positive_count = (m.delta_pos > 0.0 ? 1 : 0) + (m.delta_vel > 0.0 ? 1 : 0) +
                               (m.kind == MinimizerKind::smooth ? 1 : 0);
    CHECK(positive_count == 1);
    if (k < 0) CHECK(m.kind == MinimizerKind::position_jump);
    if (k == 0) CHECK(m.kind == MinimizerKind::smooth);
    if (k > 0) CHECK(m.kind == MinimizerKind::velocity_jump);
  }
}
