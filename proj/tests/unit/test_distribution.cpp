#include <cmath>

#include "doctest.h"
#include "frobkit/distribution.hpp"
#include "frobkit/error.hpp"
#include "test_support.hpp"

using namespace frobkit;
namespace ft = frobkit::testing;

namespace {

const Expr x1 = Expr::variable(0);

KVectorField vf(const Box& box, std::vector<Expr> comps) {
  return KVectorField(1, std::move(comps), box);
}

Frame contact_frame(const Box& box) {
  return Frame({vf(box, {1.0, 0.0, 0.0}), vf(box, {0.0, 1.0, x1})});
}

Frame constant_frame(const Box& box) {
  return Frame({vf(box, {1.0, 0.0, 0.0}), vf(box, {0.0, 1.0, 0.0})});
}

Frame mixed_frame(const Box& box) {
  return Frame({vf(box, {1.0, 0.0, 0.0}), vf(box, {0.0, 1.0, x1 * x1})});
}

// Random frame: either generic polynomial fields or an involutive one
// v_i = Σ_{j<=k} a_ij(x) e_j.
Frame random_frame(ft::Rng& rng, int n, int k, bool involutive,
                   const Box& box) {
  std::vector<KVectorField> vs;
  for (int i = 0; i < k; ++i) {
    std::vector<Expr> comps(n, Expr(0.0));
    for (int j = 0; j < n; ++j) {
      if (involutive && j >= k) continue;
      comps[j] = 0.3 * ft::random_polynomial(rng, n, 2, 3);
    }
    // Diagonal dominance keeps the frame away from degeneracy.
    comps[i] = comps[i] + 3.0;
    vs.push_back(vf(box, comps));
  }
  return Frame(std::move(vs));
}

}  // namespace

TEST_CASE("vhat and classify examples") {
  const Box box = Box::cube(3, -1, 1);
  const Point x = {0.2, -0.3, 0.4};
  const auto c = vhat(contact_frame(box), x);
  CHECK(c.space.dim() == 3);
  CHECK(c.consistent);
  CHECK(classify(contact_frame(box), x) == 3);

  const auto s = vhat(constant_frame(box), x);
  CHECK(s.space.dim() == 2);
  CHECK(s.space.basis().row(2).norm() <= 1e-15);
  CHECK(classify(constant_frame(box), x) == 2);

  CHECK(classify(mixed_frame(box), Point{0.0, 0.5, 0.5}) == 2);
  CHECK(classify(mixed_frame(box), Point{0.3, 0.5, 0.5}) == 3);
  CHECK(vhat(mixed_frame(box), Point{0.0, 0.5, 0.5}).consistent);
}

TEST_CASE("frame bookkeeping") {
  const Box box = Box::cube(3, -1, 1);
  const Frame f = contact_frame(box);
  CHECK(f.value(Point{0.5, 0, 0}) ==
        MultiVector::basis(3, {1, 2}) + MultiVector::basis(3, {1, 3}, 0.5));
  CHECK(f.divergence().eval(Point{0.5, 0, 0}) == MultiVector::basis(3, {3}));
  CHECK(f.bracket(0, 1).eval(Point{0.5, 0, 0}) == MultiVector::basis(3, {3}));
  const Frame degenerate({vf(box, {1.0, 0.0, 0.0}), vf(box, {x1, 0.0, 0.0})});
  CHECK_THROWS_AS(degenerate.plane(Point{0.1, 0, 0}), DegenerateFrame);
  CHECK_THROWS_AS(vhat(degenerate, Point{0.1, 0, 0}), DegenerateFrame);
}

TEST_CASE("involutivity residual examples") {
  const Box box = Box::cube(3, -1, 1);
  CHECK(involutivity_residual(contact_frame(box), Point{0.3, 0.1, 0.2}) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(involutivity_residual(constant_frame(box), Point{0.3, 0.1, 0.2}) ==
        0.0);
  CHECK(involutivity_residual(mixed_frame(box), Point{0.5, 0.1, 0.2}) ==
        doctest::Approx(1.0).epsilon(1e-15));
  const Frame single({vf(box, {1.0, 0.0, 0.0})});
  CHECK_THROWS_AS(involutivity_residual(single, Point{0, 0, 0}), GradeError);
}

TEST_CASE("stratify examples") {
  const GridSpec unit{Box::cube(3, 0, 1), 9};
  const auto r = stratify(contact_frame(unit.box), unit);
  CHECK(r.points.size() == 729);
  CHECK(r.counts_by_d.at(3) == 729);
  CHECK(r.non_involutive() == 729);
  CHECK(r.invalid == 0);
  CHECK(r.route_inconsistent == 0);

  const auto s = stratify(constant_frame(unit.box), unit);
  CHECK(s.counts_by_d.at(2) == 729);
  CHECK(s.non_involutive() == 0);

  const GridSpec sym{Box::cube(3, -1, 1), 9};
  const auto m = stratify(mixed_frame(sym.box), sym);
  CHECK(m.counts_by_d.at(2) == 81);
  CHECK(m.counts_by_d.at(3) == 648);
  for (const auto& p : m.points) {
    CHECK(*p.d == (p.x[0] == 0.0 ? 2 : 3));
    REQUIRE(p.weak_residual.has_value());
    CHECK(*p.weak_residual == doctest::Approx(2 * std::abs(p.x[0])));
  }
}

TEST_CASE("stratify order and thread independence") {
  const GridSpec grid{Box::cube(3, -1, 1), 7};
  const Frame f = mixed_frame(grid.box);
  const auto one = stratify(f, grid, kDefaultRankTolerance, 1);
  const auto four = stratify(f, grid, kDefaultRankTolerance, 4);
  REQUIRE(one.points.size() == four.points.size());
  for (std::size_t i = 0; i < one.points.size(); ++i) {
    CHECK(one.points[i].x == grid.point(i));
    CHECK(one.points[i].x == four.points[i].x);
    CHECK(one.points[i].d == four.points[i].d);
    CHECK(one.points[i].residual == four.points[i].residual);
  }
  CHECK(grid.point(0) == Point{-1, -1, -1});
  CHECK(grid.point(1)[2] == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
  CHECK(grid.point(grid.size() - 1) == Point{1, 1, 1});
}

TEST_CASE("degenerate points are invalid, not fatal") {
  const GridSpec grid{Box::cube(3, -1, 1), 3};
  const Box& b = grid.box;
  const Frame f({vf(b, {1.0, 0.0, 0.0}), vf(b, {0.0, x1, 0.0})});
  const auto r = stratify(f, grid);
  CHECK(r.invalid == 9);
  CHECK(r.counts_by_d.at(2) == 18);
}

TEST_CASE("route consistency and residual equivalence on random frames") {
  ft::Rng rng(51);
  int involutive_hits = 0;
  int generic_hits = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = ft::uniform_int(rng, 3, 5);
    const int k = ft::uniform_int(rng, 2, std::min(3, n - 1));
    const bool involutive = trial % 3 == 0;
    const Box box = Box::cube(n, -1, 1);
    const Frame f = random_frame(rng, n, k, involutive, box);
    const Point x = ft::random_point(rng, box);
    const auto res = vhat(f, x);
    CHECK(res.route_residual <= kRouteConsistencyTolerance);
    const int d = res.space.dim();
    const double residual = involutivity_residual(f, x);
    CHECK((residual <= 1e-9) == (d == k));
    if (involutive) {
      CHECK(d == k);
      ++involutive_hits;
    } else if (d > k) {
      ++generic_hits;
    }
  }
  CHECK(involutive_hits > 300);
  CHECK(generic_hits > 300);
}

TEST_CASE("classification is frame independent") {
  ft::Rng rng(52);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = ft::uniform_int(rng, 3, 5);
    const int k = ft::uniform_int(rng, 2, std::min(3, n - 1));
    const Box box = Box::cube(n, -1, 1);
    const Frame f = random_frame(rng, n, k, trial % 2 == 0, box);
    std::vector<KVectorField> scaled;
    for (const auto& v : f.vectors()) {
      // Positive smooth rescaling.
      scaled.push_back(v * exp(0.5 * ft::random_polynomial(rng, n, 2, 2)));
    }
    const Frame g(std::move(scaled));
    const Point x = ft::random_point(rng, box);
    CHECK(classify(f, x) == classify(g, x));
    CHECK((involutivity_residual(f, x) <= 1e-9) ==
          (involutivity_residual(g, x) <= 1e-9));
  }
  // Mixed example: the zero set x1 = 0 survives rescaling.
  const Box box = Box::cube(3, -1, 1);
  const Frame g({vf(box, {2.0 + x1 * x1, 0.0, 0.0}),
                 vf(box, {0.0, exp(x1), exp(x1) * x1 * x1})});
  CHECK(classify(g, Point{0.0, 0.2, 0.3}) == 2);
  CHECK(classify(g, Point{0.25, 0.2, 0.3}) == 3);
  CHECK(involutivity_residual(g, Point{0.0, 0.2, 0.3}) == 0.0);
}
