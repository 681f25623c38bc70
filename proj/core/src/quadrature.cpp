#include "frobkit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "frobkit/error.hpp"

namespace frobkit {

namespace {

// P_m(x) and P_m'(x) by the three-term recurrence.
std::pair<double, double> legendre(int m, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int j = 2; j <= m; ++j) {
    const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return {p1, m * (x * p1 - p0) / (x * x - 1.0)};
}

QuadratureRule build_gauss(int m) {
  QuadratureRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  if (m == 1) {
    rule.nodes[0] = 0.5;
    rule.weights[0] = 1.0;
    return rule;
  }
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(m, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(m, x).second;
    // [-1, 1] -> [0, 1], ascending.
    rule.nodes[m - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[m - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(int m) {
  if (m < 1 || m > 64) throw Error("gauss_legendre: unsupported order");
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, build_gauss(m)).first;
  return it->second;
}

QuadratureRule composite_gauss(double a, double b, int panels, int m) {
  if (panels < 1) throw Error("composite_gauss: need at least one panel");
  std::vector<double> breaks;
  for (int p = 1; p < panels; ++p) breaks.push_back(a + (b - a) * p / panels);
  return split_gauss(a, b, std::move(breaks), m);
}

QuadratureRule split_gauss(double a, double b, std::vector<double> breaks,
                           int m) {
  const QuadratureRule& base = gauss_legendre(m);
  std::erase_if(breaks, [&](double t) { return !(t > a && t < b); });
  std::sort(breaks.begin(), breaks.end());
  breaks.insert(breaks.begin(), a);
  breaks.push_back(b);
  QuadratureRule out;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double lo = breaks[p];
    const double len = breaks[p + 1] - lo;
    if (len <= 0.0) continue;
    for (std::size_t i = 0; i < base.size(); ++i) {
      out.nodes.push_back(lo + len * base.nodes[i]);
      out.weights.push_back(len * base.weights[i]);
    }
  }
  return out;
}

namespace {

SimplexRule build_simplex(int k, int m) {
  SimplexRule rule;
  rule.k = k;
  if (k == 0) {
    rule.weights = {1.0};
    return rule;
  }
  const QuadratureRule& g = gauss_legendre(m);
  std::vector<int> digits(k, 0);
  std::vector<double> u(k);
  while (true) {
    // u_j = (1 - s_1)...(1 - s_{j-1}) s_j; the Jacobian is the product of
    // those prefactors.
    double remaining = 1.0;
    double weight = 1.0;
    for (int j = 0; j < k; ++j) {
      const double s = g.nodes[digits[j]];
      u[j] = remaining * s;
      weight *= g.weights[digits[j]] * remaining;
      remaining *= 1.0 - s;
    }
    rule.points.insert(rule.points.end(), u.begin(), u.end());
    rule.weights.push_back(weight);
    int j = k - 1;
    while (j >= 0 && ++digits[j] == m) digits[j--] = 0;
    if (j < 0) break;
  }
  return rule;
}

}  // namespace

const SimplexRule& simplex_rule(int k, int m) {
  if (k < 0 || k > 10) throw GradeError("simplex_rule: unsupported dimension");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, SimplexRule> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(k, m);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_simplex(k, m)).first;
  return it->second;
}

void KahanSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

}  // namespace frobkit
