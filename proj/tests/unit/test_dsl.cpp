#include <cmath>

#include "doctest.h"
#include "frobkit/dsl.hpp"
#include "frobkit/error.hpp"
#include "test_support.hpp"

using namespace frobkit;
namespace ft = frobkit::testing;

namespace {

double eval(const std::string& text, std::vector<double> x) {
  return parse_expression(text, static_cast<int>(x.size())).evaluate(x);
}

void expect_error_at(const std::string& text, std::size_t line,
                     std::size_t col) {
  try {
    parse_fields(text);
    FAIL("no ParseError for: " << text);
  } catch (const ParseError& e) {
    INFO(e.what());
    CHECK(e.line() == line);
    CHECK(e.column() == col);
  }
}

Expr random_expr(ft::Rng& rng, int n, int depth) {
  if (depth == 0 || ft::uniform_int(rng, 0, 3) == 0) {
    if (ft::uniform_int(rng, 0, 1) == 0) return Expr(ft::uniform(rng, -3, 3));
    return Expr::variable(ft::uniform_int(rng, 0, n - 1));
  }
  const Expr a = random_expr(rng, n, depth - 1);
  const Expr b = random_expr(rng, n, depth - 1);
  switch (ft::uniform_int(rng, 0, 8)) {
    case 0: return a + b;
    case 1: return a - b;
    case 2: return a * b;
    case 3: return Expr::divide(a, 3.0 + b * b);
    case 4: return -a;
    case 5: return pow(a, ft::uniform_int(rng, 0, 4));
    case 6: return sin(a);
    case 7: return cos(a);
    default: return exp(0.1 * a);
  }
}

}  // namespace

TEST_CASE("expression grammar") {
  CHECK(eval("2*3+4", {}) == 10.0);
  CHECK(eval("(1+2)*3", {}) == 9.0);
  CHECK(eval("8/4/2", {}) == 1.0);
  CHECK(eval("1-2-3", {}) == -4.0);
  // '^' binds tighter than unary minus.
  CHECK(eval("-x1^2", {3.0}) == -9.0);
  CHECK(eval("(-x1)^2", {3.0}) == 9.0);
  CHECK(eval("x1^-1", {4.0}) == 0.25);
  CHECK(eval("2*x1^3*x2", {2.0, 0.5}) == 8.0);
  CHECK(eval("sin(x1)^2 + cos(x1)^2", {0.7}) == doctest::Approx(1.0));
  CHECK(eval("exp(0)", {}) == 1.0);
  CHECK(eval(" 1.5e1 + .5 ", {}) == 15.5);
  CHECK(eval("x2 - x1", {1.0, 5.0}) == 4.0);
  CHECK_THROWS_AS(parse_expression("x1^1.5", 1), ParseError);
  CHECK_THROWS_AS(parse_expression("x1^x1", 1), ParseError);
  CHECK_THROWS_AS(parse_expression("x2", 1), ParseError);
  CHECK_THROWS_AS(parse_expression("x0", 1), ParseError);
  CHECK_THROWS_AS(parse_expression("tan(x1)", 1), ParseError);
  CHECK_THROWS_AS(parse_expression("1 +", 1), ParseError);
  CHECK_THROWS_AS(parse_expression("1 2", 1), ParseError);
  CHECK_THROWS_AS(parse_expression("(1", 1), ParseError);
}

TEST_CASE("contact frame from the one-line form") {
  const auto def = parse_fields("n=3; v1=[1,0,0]; v2=[0,1,x1]");
  CHECK(def.n == 3);
  CHECK(def.domain.lo == std::vector<double>{0, 0, 0});
  CHECK(def.domain.hi == std::vector<double>{1, 1, 1});
  REQUIRE(def.vectors.size() == 2);
  CHECK_FALSE(def.density);
  CHECK_FALSE(def.tau);
  const Frame f = def.frame();
  const Point x{0.3, 0.1, 0.8};
  CHECK(f.value(x) == MultiVector::basis(3, {1, 2}) +
                          0.3 * MultiVector::basis(3, {1, 3}));
  CHECK(f.divergence().eval(x) == MultiVector::basis(3, {3}));
}

TEST_CASE("bracket of a parsed frame") {
  const auto def = parse_fields("n = 3\nv1 = [1, 0, 0]\nv2 = [0, 1, x1^2]\n");
  const Frame f = def.frame();
  for (double x1 : {0.0, 0.25, 0.5, 1.0}) {
    const Point x{x1, 0.2, 0.3};
    CHECK(f.bracket(0, 1).eval(x) == 2 * x1 * MultiVector::basis(3, {3}));
  }
}

TEST_CASE("file layout: comments, newlines in brackets, optional entries") {
  const auto def = parse_fields(
      "# contact structure\n"
      "n = 3   # ambient dimension\n"
      "domain = [-1, 1] x [0, 2] x [-0.5, 0.5]\n"
      "\n"
      "v1 = [1,\n"
      "      0,\n"
      "      0]\n"
      "v2 = [0, 1, x1]; density = 1 + x3^2\n"
      "tau = [1, x1, 0]\n");
  CHECK(def.domain.lo == std::vector<double>{-1, 0, -0.5});
  CHECK(def.domain.hi == std::vector<double>{1, 2, 0.5});
  REQUIRE(def.density);
  CHECK(def.density->evaluate(std::vector<double>{0, 0, 0.5}) == 1.25);
  REQUIRE(def.tau);
  CHECK(def.tau->k() == 2);
  CHECK(def.tau->eval(std::vector<double>{0.5, 1, 0}) ==
        MultiVector::basis(3, {1, 2}) + 0.5 * MultiVector::basis(3, {1, 3}));
  // n inferred from v1.
  CHECK(parse_fields("v1 = [1, x2]").n == 2);
}

TEST_CASE("errors carry locations") {
  expect_error_at("v1=[1,0", 1, 4);
  expect_error_at("n=3\nv1=[1,0]", 2, 4);         // arity
  expect_error_at("n=3\nv1=[1,0,y]", 2, 9);       // unknown identifier
  expect_error_at("n=2\nv1=[1,x3]", 2, 7);        // variable beyond n
  expect_error_at("n=3\nw=[1,0,0]", 2, 1);        // unknown declaration
  expect_error_at("n=3\nv1=[1,0,0]\nv1=[0,1,0]", 3, 1);
  expect_error_at("n=3\nv2=[0,1,0]", 2, 4);       // v2 without v1
  expect_error_at("n=3\nv1=[1,0,0]\ntau=[1,2]", 3, 5);
  expect_error_at("n=2\ndomain=[0,1]\nv1=[1,0]", 2, 8);
  expect_error_at("n=2\ndomain=[1,0] x [0,1]", 2, 8);
  expect_error_at("n=2 $", 1, 5);
  expect_error_at("n=2.5", 1, 3);
  expect_error_at("n=3 v1=[1,0,0]", 1, 5);
  expect_error_at("v1=[1,0,0]\nv2=[0,1,x1^0.5]", 2, 12);
  CHECK_THROWS_AS(parse_fields(""), ParseError);
  CHECK_THROWS_AS(parse_fields("n=3").frame(), Error);
}

TEST_CASE("pretty print round trip") {
  ft::Rng rng(91);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = ft::uniform_int(rng, 1, 4);
    FieldDefinition def;
    def.n = n;
    def.domain = Box::cube(n, -ft::uniform(rng, 0.5, 2), ft::uniform(rng, 0.5, 2));
    const int k = ft::uniform_int(rng, 1, n);
    for (int i = 0; i < k; ++i) {
      std::vector<Expr> comps;
      for (int j = 0; j < n; ++j) comps.push_back(random_expr(rng, n, 4));
      def.vectors.emplace_back(1, std::move(comps), def.domain);
    }
    def.density = random_expr(rng, n, 3);
    std::vector<Expr> tau;
    for (std::size_t j = 0; j < binomial(n, k); ++j) {
      tau.push_back(random_expr(rng, n, 3));
    }
    def.tau = KVectorField(k, std::move(tau), def.domain);

    const std::string text = pretty_print(def);
    const FieldDefinition back = parse_fields(text);
    INFO(text);
    REQUIRE(back.n == n);
    CHECK(back.domain.lo == def.domain.lo);
    CHECK(back.domain.hi == def.domain.hi);
    REQUIRE(back.vectors.size() == def.vectors.size());
    REQUIRE(back.tau);
    REQUIRE(back.density);
    CHECK(pretty_print(back) == text);
    for (int p = 0; p < 100; ++p) {
      const Point x = ft::random_point(rng, def.domain);
      for (std::size_t i = 0; i < def.vectors.size(); ++i) {
        CHECK((def.vectors[i].eval(x) - back.vectors[i].eval(x)).max_abs() <=
              1e-15);
      }
      CHECK(std::abs(def.density->evaluate(x) - back.density->evaluate(x)) <=
            1e-15);
      CHECK((def.tau->eval(x) - back.tau->eval(x)).max_abs() <= 1e-15);
    }
  }
  // 100 points on one fixed definition.
  const auto def = parse_fields(
      "n=3; v1=[sin(x1)*x2, exp(x3)/(2+x1^2), -x2^3]; v2=[1, cos(x1-x2), x1]");
  const auto back = parse_fields(pretty_print(def));
  for (int p = 0; p < 100; ++p) {
    const Point x = ft::random_point(rng, def.domain);
    for (int i = 0; i < 2; ++i) {
      CHECK((def.vectors[i].eval(x) - back.vectors[i].eval(x)).max_abs() <=
            1e-15);
    }
  }
}

TEST_CASE("parsing is deterministic") {
  const std::string text = "n=3; v1=[1,0,0]; v2=[0,1,x1*x2 - 0.1]";
  CHECK(pretty_print(parse_fields(text)) == pretty_print(parse_fields(text)));
}
