#include <cmath>
#include <numbers>

#include "doctest.h"
#include "frobkit/error.hpp"
#include "frobkit/verify.hpp"

using namespace frobkit;

namespace {

const Box kCube = Box::cube(3, 0, 1);

KVectorField vec3(std::vector<Expr> c, const Box& box = kCube) {
  return KVectorField(1, std::move(c), box);
}

Frame contact() {
  return Frame({vec3({1.0, 0.0, 0.0}), vec3({0.0, 1.0, Expr::variable(0)})});
}

}  // namespace

TEST_CASE("alpha form examples") {
  const Frame f = contact();
  const KForm alpha = alpha_form(f.wedge(), MultiVector::scalar(3, 1.0));
  CHECK(alpha.k() == 1);
  for (double x1 : {0.0, 0.3, 0.9}) {
    const MultiCovector a = alpha.eval(std::vector<double>{x1, 0.4, 0.7});
    // ★v = dx3 - x1 dx2
    CHECK(a[0] == doctest::Approx(0.0));
    CHECK(a[1] == doctest::Approx(-x1));
    CHECK(a[2] == doctest::Approx(1.0));
  }

  const KVectorField zero = KVectorField::constant(MultiVector(3, 2), kCube);
  const KForm a0 = alpha_form(zero, MultiVector::scalar(3, 1.0));
  CHECK(a0.eval(std::vector<double>{0.5, 0.5, 0.5}).max_abs() == 0.0);

  const Box box4 = Box::cube(4, 0, 1);
  const KVectorField e12 =
      KVectorField::constant(MultiVector::basis(4, {1, 2}), box4);
  const KForm a4 = alpha_form(e12, MultiVector::basis(4, {4}));
  CHECK(a4.k() == 1);
  const MultiCovector val = a4.eval(std::vector<double>{0.1, 0.2, 0.3, 0.4});
  CHECK(val[2] == 1.0);
  CHECK(val.max_abs() == 1.0);

  CHECK_THROWS_AS(alpha_form(vec3({1.0, 0.0, 0.0}), MultiVector::scalar(3, 1)),
                  GradeError);
}

TEST_CASE("ball integral") {
  const double pi = std::numbers::pi;
  CHECK(ball_integral(Expr(1.0), Ball{{0.3}, 0.5}) == doctest::Approx(1.0));
  CHECK(ball_integral(Expr(1.0), Ball{{0.3, 0.1}, 0.5}) ==
        doctest::Approx(pi * 0.25).epsilon(1e-14));
  CHECK(ball_integral(Expr(1.0), Ball{{0, 0, 0}, 1.0}) ==
        doctest::Approx(4 * pi / 3).epsilon(1e-14));
  const Expr x1 = Expr::variable(0);
  CHECK(ball_integral(x1 * x1, Ball{{0, 0, 0}, 1.0}) ==
        doctest::Approx(4 * pi / 15).epsilon(1e-14));
  // Shifted center: ∫ x1 over B(c, r) = c1 vol.
  CHECK(ball_integral(x1, Ball{{0.4, 0.5, 0.6}, 0.2}) ==
        doctest::Approx(0.4 * 4 * pi / 3 * 0.008).epsilon(1e-14));
  for (int n = 1; n <= 3; ++n) {
    const Point c(n, 0.5);
    CHECK(ball_integral(bump_profile(c, 0.3), Ball{c, 0.3}) ==
          doctest::Approx(bump_integral(n, 0.3)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(ball_integral(Expr(1.0), Ball{Point(4, 0.0), 1.0}),
                  DimensionMismatch);
}

TEST_CASE("bump ensemble") {
  EnsembleSpec spec;
  const auto a = bump_ensemble(kCube, kCube, 0, spec);
  const auto b = bump_ensemble(kCube, kCube, 0, spec);
  REQUIRE(a.size() == 20);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Ball& ball = a[i].supports().front();
    CHECK(ball.radius >= 0.1);
    CHECK(ball.radius <= 0.3);
    for (int j = 0; j < 3; ++j) {
      CHECK(ball.center[j] - ball.radius >= 0.0);
      CHECK(ball.center[j] + ball.radius <= 1.0);
    }
    CHECK(ball.center == b[i].supports().front().center);
  }
  spec.seed = 7;
  const auto c = bump_ensemble(kCube, kCube, 2, spec);
  CHECK(c.front().k() == 2);
  CHECK(c.front().supports().front().center != a.front().supports().front().center);
}

TEST_CASE("lemma checks") {
  const Frame f = contact();
  std::vector<Point> pts;
  for (double t : {0.0, 0.25, 0.5, 1.0}) pts.push_back({t, 1 - t, 0.5 * t});
  const auto r =
      lemma_alpha_check(f, f.wedge(), MultiVector::scalar(3, 1.0), pts);
  CHECK(r.pass());
  REQUIRE(r.sign_sigma);
  CHECK(*r.sign_sigma == -1);

  const Frame flat({vec3({1.0, 0.0, 0.0}), vec3({0.0, 1.0, 0.0})});
  const auto s =
      lemma_alpha_check(flat, flat.wedge(), MultiVector::scalar(3, 1.0), pts);
  CHECK(s.pass());
  CHECK_FALSE(s.sign_sigma);
}

TEST_CASE("weak identity example") {
  const Scenario s = zworski_scenario(32);
  CHECK(tangency_residual(s) == 0.0);
  const KForm f = bump_form(kCube, {0.5, 0.5, 0.5}, 0.25,
                            MultiCovector::scalar(3, 1.0));
  const auto w = weak_key_identity(s, s.frame.wedge(),
                                   MultiVector::scalar(3, 1.0), f);
  const double expected = -bump_integral(3, 0.25);
  CHECK(w.a == doctest::Approx(expected).epsilon(1e-4));
  CHECK(w.b == doctest::Approx(expected).epsilon(1e-4));
  REQUIRE(w.analytic);
  CHECK(*w.analytic == doctest::Approx(w.b).epsilon(1e-12));

  // A current transverse to the distribution fails the precheck.
  const Scenario bad{"transverse", s.frame,
                     LebesgueCurrent(KVectorField::constant(
                                         MultiVector::basis(3, {1, 3}), kCube),
                                     1.0, kCube, 8),
                     std::nullopt, kCube};
  CHECK(tangency_residual(bad) > 0.5);
  CHECK_THROWS_AS(weak_key_identity(bad, s.frame.wedge(),
                                    MultiVector::scalar(3, 1.0), f),
                  PrecheckFailure);
  CHECK_THROWS_AS(strong_key_identity(bad, {s.frame.wedge()}, {f}, 1e-2),
                  Error);
}

TEST_CASE("strong identity sign") {
  const Scenario s = zworski_scenario(24);
  EnsembleSpec spec;
  spec.count = 4;
  const auto fs = bump_ensemble(kCube, kCube, 0, spec);
  const auto v = s.frame.wedge();
  const auto r = strong_key_identity(s, {v, v * Expr::variable(1)}, fs, 1e-2);
  CHECK(r.pass());
  REQUIRE(r.sign_sigma);
  CHECK(*r.sign_sigma == -1);
}

TEST_CASE("gpb check") {
  const auto z = gpb_check(zworski_scenario(6));
  CHECK(z.applicable);
  CHECK(z.samples > 0);
  CHECK(z.dimension_matches == z.samples);
  CHECK(z.min_sum_dimension == 3);
  // sin of the angle between e3 and V(x) is 1/sqrt(1 + x1²).
  CHECK(z.min_containment >= 1 / std::sqrt(2.0) - 1e-12);
  CHECK(z.max_containment >= 0.9);

  const auto s = gpb_check(involutive_smoke_scenario());
  CHECK(s.applicable);
  CHECK(s.max_containment <= 1e-12);
  CHECK(s.dimension_matches == s.samples);

  const Scenario no_boundary{"none", contact(), zworski_scenario(4).current,
                             std::nullopt, kCube};
  CHECK_FALSE(gpb_check(no_boundary).applicable);
}

TEST_CASE("magic check precheck") {
  const Scenario s = zworski_scenario(8);
  const Box wide = Box::cube(3, -1, 2);
  const FlowSpec across(vec3({0.0, 0.0, 1.0}, wide));
  const KForm w = bump_form(wide, {0.5, 0.5, 0.5}, 0.2,
                            MultiCovector::basis(3, {1, 2}));
  CHECK_THROWS_AS(magic_check(s, across, 0, 0.1, {w}, {}), PrecheckFailure);
}

TEST_CASE("named scenarios") {
  CHECK(named_scenarios().size() == 4);
  CHECK_THROWS_AS(run_scenario("nope"), Error);

  ScenarioOptions quick;
  quick.ensemble.count = 5;
  const auto p = run_scenario("parabola", quick);
  CHECK(p.pass());
  CHECK(p.timing_ms > 0.0);
  CHECK_FALSE(p.sign_sigma);

  const auto smoke = run_scenario("involutive-smoke", quick);
  CHECK(smoke.pass());
  CHECK_FALSE(smoke.sign_sigma);
  REQUIRE(smoke.stratification);
  CHECK(smoke.stratification->total == 729);

  quick.threads = 3;
  const auto p3 = run_scenario("parabola", quick);
  REQUIRE(p3.checks.size() == p.checks.size());
  for (std::size_t i = 0; i < p.checks.size(); ++i) {
    CHECK(p3.checks[i].lhs == p.checks[i].lhs);
  }
}

TEST_CASE("zworski scenario") {
  ScenarioOptions quick;
  quick.ensemble.count = 6;
  quick.strong_resolution = 32;
  const auto r = run_zworski(quick);
  for (const auto& c : r.checks) {
    INFO(c.name);
    CHECK(c.pass);
  }
  REQUIRE(r.sign_sigma);
  CHECK(*r.sign_sigma == -1);
  REQUIRE(r.stratification);
  CHECK(r.stratification->counts_by_d.at(3) == 729);
}

TEST_CASE("weak identity study bookkeeping") {
  const auto study = weak_identity_study(8, 2, 2, 3);
  CHECK(study.resolutions == std::vector<int>{8, 16});
  CHECK(study.errors.size() == 2);
  CHECK(study.orders.size() == 1);
  CHECK(study.draw_errors.size() == 2);
  CHECK(study.draw_errors[0].size() == 2);
  CHECK(study.errors[1] < study.errors[0]);
}
