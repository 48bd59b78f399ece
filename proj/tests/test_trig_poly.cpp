#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "parab/trig_poly.hpp"

using namespace parab;
using Catch::Approx;

namespace {
// Fig-2 style potential used across the suite.
TrigPolynomial two_minus_cos2() { return TrigPolynomial(2.0, {0.0, -1.0}, {}); }
}  // namespace

TEST_CASE("jet of 2 - cos 2theta at reference angles") {
  const auto u = two_minus_cos2();
  const Jet2 j0 = u.jet(0.0);
  CHECK(j0.value == Approx(1.0).margin(1e-15));
  CHECK(j0.d1 == Approx(0.0).margin(1e-15));
  CHECK(j0.d2 == Approx(4.0).margin(1e-14));

  const Jet2 jh = u.jet(kPi / 2);
  CHECK(jh.value == Approx(3.0).margin(1e-14));
  CHECK(jh.d1 == Approx(0.0).margin(1e-13));
  CHECK(jh.d2 == Approx(-4.0).margin(1e-13));
}

TEST_CASE("jet of a constant potential") {
  const auto u = TrigPolynomial::constant_potential(2.5);
  for (double th : {0.0, 1.0, -3.7, 12.0}) {
    const Jet2 j = u.jet(th);
    CHECK(j.value == 2.5);
    CHECK(j.d1 == 0.0);
    CHECK(j.d2 == 0.0);
  }
}

TEST_CASE("jet is exactly 2pi periodic") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  for (int rep = 0; rep < 20; ++rep) {
    TrigPolynomial u(2.0 + coeff(rng), {coeff(rng), coeff(rng), coeff(rng)},
                     {coeff(rng), coeff(rng), coeff(rng)});
    const double th = angle(rng);
    const Jet2 a = u.jet(th);
    const Jet2 b = u.jet(th + kTwoPi);
    CHECK(a.value == Approx(b.value).margin(1e-12));
    CHECK(a.d1 == Approx(b.d1).margin(1e-11));
    CHECK(a.d2 == Approx(b.d2).margin(1e-10));
  }
}

TEST_CASE("central configurations of 2 - cos 2theta") {
  const auto cfgs = find_central_configurations(two_minus_cos2());
  REQUIRE(cfgs.size() == 4);
  const double expect[4] = {0.0, kPi / 2, kPi, 3 * kPi / 2};
  const CriticalKind kinds[4] = {CriticalKind::minimum, CriticalKind::maximum,
                                 CriticalKind::minimum, CriticalKind::maximum};
  for (int i = 0; i < 4; ++i) {
    CHECK(cfgs[i].angle == Approx(expect[i]).margin(1e-10));
    CHECK(cfgs[i].kind == kinds[i]);
    CHECK(std::abs(two_minus_cos2().derivative(cfgs[i].angle)) < 1e-12);
  }
}

TEST_CASE("constant potential rejected with diagnostic") {
  CHECK_THROWS_WITH(find_central_configurations(TrigPolynomial::constant_potential(1.0)),
                    Catch::Matchers::ContainsSubstring("constant potential"));
}

TEST_CASE("perturbed potential keeps four simple roots") {
  TrigPolynomial u(2.0, {0.0, -1.0}, {0.1});  // 2 - cos2t + 0.1 sin t
  const auto cfgs = find_central_configurations(u);
  REQUIRE(cfgs.size() == 4);
  int minima = 0;
  for (const auto& c : cfgs) {
    CHECK(std::abs(u.derivative(c.angle)) < 1e-12);
    CHECK(c.kind != CriticalKind::degenerate);
    if (c.kind == CriticalKind::minimum) ++minima;
  }
  CHECK(minima == 2);
}

TEST_CASE("sorted critical points of a Morse potential alternate min/max") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> coeff(-0.4, 0.4);
  for (int rep = 0; rep < 10; ++rep) {
    TrigPolynomial u(2.0, {coeff(rng), -1.0 + coeff(rng)}, {coeff(rng), coeff(rng)});
    const auto cfgs = find_central_configurations(u);
    bool morse = true;
    for (const auto& c : cfgs)
      if (c.kind == CriticalKind::degenerate) morse = false;
    if (!morse) continue;
    REQUIRE(cfgs.size() % 2 == 0);
    for (std::size_t i = 0; i + 1 < cfgs.size(); ++i)
      CHECK(cfgs[i].kind != cfgs[i + 1].kind);
  }
}

TEST_CASE("degenerate root is flagged, not dropped") {
  // U' = sin t (1 - cos t) = sin t - sin 2t / 2 has a triple zero at 0;
  // U = c - cos t + cos 2t / 4.
  TrigPolynomial u(2.0, {-1.0, 0.25}, {});
  const auto cfgs = find_central_configurations(u);
  bool found_degenerate_at_zero = false;
  for (const auto& c : cfgs) {
    const double d = std::min(std::abs(c.angle), kTwoPi - std::abs(c.angle));
    if (d < 1e-6 && c.kind == CriticalKind::degenerate) found_degenerate_at_zero = true;
  }
  CHECK(found_degenerate_at_zero);
}

TEST_CASE("class-U check on the reference sectors") {
  const auto u = two_minus_cos2();
  CHECK(check_class_U(u, 0.0, kPi).pass);

  const auto bad = check_class_U(u, kPi / 2, 3 * kPi / 2);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.nondegenerate_1);  // U'' < 0 at both angles
  CHECK_FALSE(bad.nondegenerate_2);
}

TEST_CASE("class-U level-equality clause") {
  // 2 - cos2t + 0.3 cos t: minima at 0 (level 1.3) and pi (level 0.7).
  TrigPolynomial u(2.0, {0.3, -1.0}, {});
  const auto d = check_class_U(u, 0.0, kPi);
  CHECK_FALSE(d.pass);
  CHECK_FALSE(d.equal_level);
  CHECK(d.level_1 == Approx(1.3).margin(1e-12));
  CHECK(d.level_2 == Approx(0.7).margin(1e-12));

  // 2 + cos2t - 2cos t has two global minima at +-pi/3, equal level 0.5.
  TrigPolynomial v(2.0, {-2.0, 1.0}, {});
  const auto ok = check_class_U(v, kPi / 3, 5 * kPi / 3);
  CHECK(ok.pass);
  CHECK(ok.level_1 == Approx(0.5).margin(1e-12));
}

TEST_CASE("too-strict concavity test") {
  const auto u = two_minus_cos2();
  CHECK(too_strict_test(u, kPi / 2, 1.0));        // -4 < -3/8
  CHECK_FALSE(too_strict_test(u, 0.0, 1.0));      // 4 >= -3/8
  TrigPolynomial mild(2.0, {0.0, -0.1}, {});      // 2 - 0.1 cos 2t
  CHECK_FALSE(too_strict_test(mild, kPi / 2, 0.1));  // -0.4 >= -0.948

  CHECK_THROWS_AS(too_strict_test(u, 0.3, 1.0), std::invalid_argument);
}

TEST_CASE("too-strict test is monotone in alpha") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> pick(0.05, 1.95);
  const auto u = two_minus_cos2();
  for (int rep = 0; rep < 50; ++rep) {
    double a1 = pick(rng), a2 = pick(rng);
    if (a1 < a2) std::swap(a1, a2);  // a2 < a1
    if (too_strict_test(u, kPi / 2, a1)) CHECK(too_strict_test(u, kPi / 2, a2));
  }
}

TEST_CASE("potential range from critical points") {
  const auto [lo, hi] = potential_range(two_minus_cos2());
  CHECK(lo == Approx(1.0).margin(1e-12));
  CHECK(hi == Approx(3.0).margin(1e-12));
}
