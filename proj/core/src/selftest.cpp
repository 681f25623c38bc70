#include "frobkit/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "frobkit/fields.hpp"
#include "frobkit/multi_index.hpp"

namespace frobkit {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

template <class Tag>
Graded<Tag> random_graded(Rng& rng, int n, int k) {
  Graded<Tag> out(n, k);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = uniform(rng);
  return out;
}

Expr random_polynomial(Rng& rng, int n, int degree) {
  Expr p = uniform(rng);
  for (int t = 0; t < 4; ++t) {
    Expr mono = uniform(rng);
    for (int d = uniform_int(rng, 1, degree); d > 0; --d) {
      mono = mono * Expr::variable(uniform_int(rng, 0, n - 1));
    }
    p = p + mono;
  }
  return p;
}

template <class Tag>
Field<Tag> random_field(Rng& rng, int n, int k, int degree, const Box& box) {
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < binomial(n, k); ++i) {
    comps.push_back(random_polynomial(rng, n, degree));
  }
  return Field<Tag>(k, std::move(comps), box);
}

Point random_point(Rng& rng, const Box& box) {
  Point x(box.n());
  for (int i = 0; i < box.n(); ++i) x[i] = uniform(rng, box.lo[i], box.hi[i]);
  return x;
}

PropertyResult property(std::string name, int draws, double tolerance,
                        Rng& rng, const std::function<double(Rng&)>& draw) {
  PropertyResult r{std::move(name), draws, 0.0, tolerance, true};
  for (int i = 0; i < draws; ++i) r.worst = std::max(r.worst, draw(rng));
  r.pass = r.worst <= tolerance;
  return r;
}

}  // namespace

std::vector<PropertyResult> run_selftest(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PropertyResult> out;

  out.push_back(property("wedge graded anticommutativity", 1000, 1e-14, rng,
                         [](Rng& g) {
    const int n = uniform_int(g, 1, 6);
    const int p = uniform_int(g, 0, n);
    const int q = uniform_int(g, 0, n - p);
    const auto a = random_graded<VectorTag>(g, n, p);
    const auto b = random_graded<VectorTag>(g, n, q);
    const auto ab = wedge(a, b);
    const double sign = (p * q) % 2 == 0 ? 1.0 : -1.0;
    return (ab - sign * wedge(b, a)).max_abs() / std::max(1.0, ab.max_abs());
  }));

  out.push_back(property("wedge associativity", 500, 1e-12, rng, [](Rng& g) {
    const int n = uniform_int(g, 3, 6);
    const auto a = random_graded<CovectorTag>(g, n, 1);
    const auto b = random_graded<CovectorTag>(g, n, uniform_int(g, 0, n - 2));
    const auto c = random_graded<CovectorTag>(g, n, uniform_int(g, 0, n - 1 - b.k()));
    return (wedge(wedge(a, b), c) - wedge(a, wedge(b, c))).max_abs();
  }));

  out.push_back(property("trace: <v _| a, b> = <v, a ^ b>", 1000, 1e-12, rng,
                         [](Rng& g) {
    const int n = uniform_int(g, 1, 6);
    const int k = uniform_int(g, 0, n);
    const int h = uniform_int(g, 0, k);
    const auto v = random_graded<VectorTag>(g, n, k);
    const auto a = random_graded<CovectorTag>(g, n, h);
    const auto b = random_graded<CovectorTag>(g, n, k - h);
    return std::abs(pair(trace(v, a), b) - pair(v, wedge(a, b)));
  }));

  out.push_back(property("antitrace: <w, v _|' a> = <w ^ v, a>", 1000, 1e-12,
                         rng, [](Rng& g) {
    const int n = uniform_int(g, 1, 6);
    const int h = uniform_int(g, 0, n);
    const int k = uniform_int(g, 0, h);
    const auto v = random_graded<VectorTag>(g, n, k);
    const auto a = random_graded<CovectorTag>(g, n, h);
    const auto w = random_graded<VectorTag>(g, n, h - k);
    return std::abs(pair(w, antitrace(v, a)) - pair(wedge(w, v), a));
  }));

  out.push_back(property("star involution", 1000, 0.0, rng, [](Rng& g) {
    const int n = uniform_int(g, 1, 6);
    const int k = uniform_int(g, 0, n);
    const auto v = random_graded<VectorTag>(g, n, k);
    const auto a = random_graded<CovectorTag>(g, n, k);
    return std::max((star_covec(star_vec(v)) - v).max_abs(),
                    (star_vec(star_covec(a)) - a).max_abs());
  }));

  out.push_back(property("star: *v = v _|' dx", 1000, 1e-15, rng, [](Rng& g) {
    const int n = uniform_int(g, 1, 6);
    const auto v = random_graded<VectorTag>(g, n, uniform_int(g, 0, n));
    return (star_vec(v) - antitrace(v, MultiCovector::volume(n))).max_abs();
  }));

  out.push_back(property("star: *(v _| a) = *v ^ a", 1000, 1e-12, rng,
                         [](Rng& g) {
    const int n = uniform_int(g, 1, 6);
    const int k = uniform_int(g, 0, n);
    const auto v = random_graded<VectorTag>(g, n, k);
    const auto a = random_graded<CovectorTag>(g, n, uniform_int(g, 0, k));
    return (star_vec(trace(v, a)) - wedge(star_vec(v), a)).max_abs();
  }));

  out.push_back(property("d o d = 0", 200, 1e-12, rng, [](Rng& g) {
    const int n = uniform_int(g, 2, 5);
    const Box b = Box::cube(n, -1, 1);
    const auto w = random_field<CovectorTag>(g, n, uniform_int(g, 0, n - 2), 3, b);
    const auto ddw = exterior_derivative(exterior_derivative(w));
    return ddw.eval(random_point(g, b)).max_abs();
  }));

  out.push_back(property("div = (-1)^(n-k) * d *", 200, 1e-11, rng,
                         [](Rng& g) {
    const int n = uniform_int(g, 1, 5);
    const int k = uniform_int(g, 1, n);
    const Box b = Box::cube(n, -1, 1);
    const auto v = random_field<VectorTag>(g, n, k, 3, b);
    const double sign = (n - k) % 2 == 0 ? 1.0 : -1.0;
    const Point x = random_point(g, b);
    return (divergence(v).eval(x) -
            sign * star_covec(exterior_derivative(star_vec(v))).eval(x))
        .max_abs();
  }));

  out.push_back(property("leibniz rule for d", 200, 1e-11, rng, [](Rng& g) {
    const int n = uniform_int(g, 2, 5);
    const int k = uniform_int(g, 0, n - 1);
    const int kp = uniform_int(g, 0, n - 1 - k);
    const Box b = Box::cube(n, -1, 1);
    const auto w = random_field<CovectorTag>(g, n, k, 2, b);
    const auto wp = random_field<CovectorTag>(g, n, kp, 2, b);
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    const Point x = random_point(g, b);
    const auto lhs = exterior_derivative(wedge(w, wp)).eval(x);
    const auto rhs = wedge(exterior_derivative(w).eval(x), wp.eval(x)) +
                     sign * wedge(w.eval(x), exterior_derivative(wp).eval(x));
    return (lhs - rhs).max_abs();
  }));

  out.push_back(property("leibniz rule for div", 200, 1e-11, rng, [](Rng& g) {
    const int n = uniform_int(g, 2, 5);
    const int k = uniform_int(g, 1, n);
    const int h = uniform_int(g, 0, std::min(k - 1, n - 1));
    const Box b = Box::cube(n, -1, 1);
    const auto v = random_field<VectorTag>(g, n, k, 2, b);
    const auto w = random_field<CovectorTag>(g, n, h, 2, b);
    const double sign = h % 2 == 0 ? 1.0 : -1.0;
    const Point x = random_point(g, b);
    const auto lhs = divergence(trace(v, w)).eval(x);
    const auto rhs = sign * (trace(divergence(v).eval(x), w.eval(x)) +
                             trace(v.eval(x), exterior_derivative(w).eval(x)));
    return (lhs - rhs).max_abs();
  }));

  out.push_back(property("cartan expansion = direct divergence", 200, 1e-11,
                         rng, [](Rng& g) {
    const int n = uniform_int(g, 2, 5);
    const int k = uniform_int(g, 2, std::min(3, n));
    const Box b = Box::cube(n, -1, 1);
    std::vector<KVectorField> factors;
    for (int i = 0; i < k; ++i) {
      factors.push_back(random_field<VectorTag>(g, n, 1, 2, b));
    }
    KVectorField wedged = factors[0];
    for (int i = 1; i < k; ++i) wedged = wedge(wedged, factors[i]);
    const Point x = random_point(g, b);
    return (cartan_divergence(factors, x) - divergence(wedged).eval(x))
        .max_abs();
  }));

  return out;
}

}  // namespace frobkit
