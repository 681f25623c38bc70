#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace frobkit {

/// Nodes and weights on [0, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

inline constexpr int kDefaultGaussPoints = 16;

/// m-point Gauss-Legendre rule mapped to [0, 1]; exact for degree 2m-1.
const QuadratureRule& gauss_legendre(int m = kDefaultGaussPoints);

/// Composite rule: `panels` equal panels of [a, b], each with an m-point
/// Gauss-Legendre rule. Weights include the panel length.
QuadratureRule composite_gauss(double a, double b, int panels,
                               int m = kDefaultGaussPoints);

/// Gauss-Legendre over each piece of [a, b] cut at `breaks` (values outside
/// (a, b) are ignored).
QuadratureRule split_gauss(double a, double b, std::vector<double> breaks,
                           int m = kDefaultGaussPoints);

/// Rule on the reference k-simplex {u_i >= 0, Σu_i <= 1} obtained by the
/// Duffy collapse of an m^k tensor Gauss-Legendre rule. Points are stored
/// row-major (k coordinates each); weights sum to 1/k!.
struct SimplexRule {
  int k = 0;
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * k, static_cast<std::size_t>(k)};
  }
};

const SimplexRule& simplex_rule(int k, int m = kDefaultGaussPoints);

/// Neumaier's variant of Kahan summation.
class KahanSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

  KahanSum& operator+=(double x) {
    add(x);
    return *this;
  }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace frobkit
