#include <cmath>
#include <vector>

#include "doctest.h"
#include "frobkit/error.hpp"
#include "frobkit/expr.hpp"
#include "test_support.hpp"

using namespace frobkit;

namespace {

const Expr x1 = Expr::variable(0);
const Expr x2 = Expr::variable(1);

double at(const Expr& e, std::vector<double> x) { return e.evaluate(x); }

// Central difference used only as an independent oracle.
double numeric_partial(const Expr& e, std::vector<double> x, int var) {
  const double h = 1e-5;
  auto xp = x;
  auto xm = x;
  xp[var] += h;
  xm[var] -= h;
  return (e.evaluate(xp) - e.evaluate(xm)) / (2 * h);
}

}  // namespace

TEST_CASE("evaluation") {
  CHECK(at(x1 * x2 + 3.0, {2, 5}) == 13.0);
  CHECK(at(pow(x1, 3), {2}) == 8.0);
  CHECK(at(pow(x1, -2), {2}) == 0.25);
  CHECK(at(sin(x1) + cos(x2), {0, 0}) == 1.0);
  CHECK(at(exp(x1), {1}) == doctest::Approx(std::exp(1.0)));
  CHECK(at(-x1, {4}) == -4.0);
  CHECK(at(x1 / x2, {1, 4}) == 0.25);
}

TEST_CASE("constant folding and neutral elements") {
  CHECK((Expr(2.0) * Expr(3.0)).is_constant(6.0));
  CHECK((x1 * 0.0).is_constant(0.0));
  CHECK((x1 * 1.0).kind() == Expr::Kind::kVariable);
  CHECK((x1 + 0.0).kind() == Expr::Kind::kVariable);
  CHECK(x1.derivative(1).is_constant(0.0));
  CHECK(x1.derivative(0).is_constant(1.0));
  CHECK((x1 * x2).max_variable() == 1);
  CHECK(Expr(3.0).max_variable() == -1);
}

TEST_CASE("division guard") {
  const Expr inv = Expr::divide(1.0, pow(x1, 2), 1e-6);
  CHECK(at(inv, {2}) == 0.25);
  CHECK_THROWS_AS(at(inv, {0}), GuardViolation);
  CHECK_THROWS_AS(at(pow(x1, -1), {0}), GuardViolation);
  CHECK_THROWS_AS(at(x1 / x2, {1, 0}), GuardViolation);
}

TEST_CASE("symbolic derivative examples") {
  CHECK(at(sin(x2).derivative(1), {0, 0.3}) == std::cos(0.3));
  CHECK(at(pow(x1, 3).derivative(0), {2}) == 12.0);
  CHECK(at(pow(x1, -2).derivative(0), {2}) == -0.25);
  CHECK(at((x1 / x2).derivative(1), {1, 2}) == -0.25);
  CHECK(at(exp(x1 * x2).derivative(0), {1, 2}) ==
        doctest::Approx(2 * std::exp(2.0)));
}

TEST_CASE("symbolic derivatives agree with finite differences") {
  frobkit::testing::Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    Expr e = frobkit::testing::random_polynomial(rng, 3, 3);
    e = e * sin(frobkit::testing::random_polynomial(rng, 3, 1)) +
        exp(0.3 * frobkit::testing::random_polynomial(rng, 3, 2)) /
            (2.0 + cos(Expr::variable(2)));
    std::vector<double> x = {frobkit::testing::uniform(rng),
                             frobkit::testing::uniform(rng),
                             frobkit::testing::uniform(rng)};
    for (int var = 0; var < 3; ++var) {
      const double exact = e.derivative(var).evaluate(x);
      CHECK(exact == doctest::Approx(numeric_partial(e, x, var))
                         .epsilon(1e-6)
                         .scale(1.0));
    }
  }
}

TEST_CASE("printing") {
  const std::vector<std::string> names = {"x1", "x2"};
  CHECK(Expr(0.5).to_string() == "0.5");
  CHECK(Expr(-3.0).to_string() == "(-3)");
  CHECK(pow(x1, -2).to_string(names) == "(x1^-2)");
  CHECK((x1 + x2).to_string(names) == "(x1 + x2)");
  CHECK(Expr(0.1).to_string() == "0.10000000000000001");
}
