#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "frobkit/fields.hpp"
#include "frobkit/subspace.hpp"

namespace frobkit {

/// Frame v_1, ..., v_k of grade-1 fields spanning a distribution V of
/// k-planes, with its derived objects v = v_1∧…∧v_k, div v and the brackets
/// [v_i, v_j] precomputed symbolically.
class Frame {
 public:
  explicit Frame(std::vector<KVectorField> vectors);

  int n() const { return vectors_.front().n(); }
  int k() const { return static_cast<int>(vectors_.size()); }
  const Box& domain() const { return domain_; }
  const std::vector<KVectorField>& vectors() const { return vectors_; }
  const KVectorField& wedge() const { return wedge_; }
  const KVectorField& divergence() const { return divergence_; }
  /// [v_i, v_j] for 0 <= i < j < k.
  const KVectorField& bracket(int i, int j) const;

  /// v(x) = v_1(x) ∧ … ∧ v_k(x).
  MultiVector value(std::span<const double> x) const;

  /// V(x). Throws DegenerateFrame when |v(x)| < kDegenerateNorm.
  Subspace plane(std::span<const double> x,
                 double tol = kDefaultRankTolerance) const;

  static constexpr double kDegenerateNorm = 1e-12;

 private:
  std::vector<KVectorField> vectors_;
  Box domain_;
  KVectorField wedge_;
  KVectorField divergence_;
  std::vector<KVectorField> brackets_;  // upper triangle, row-major
};

/// V̂(x) computed along two routes: V + span{[v_i,v_j]} (returned) and
/// V + span(div v). The routes agree when the route residual (1 on a
/// dimension mismatch, else the largest principal-angle sine) is <= 1e-7.
struct VhatResult {
  Subspace space;
  Subspace alternate;
  double route_residual = 0.0;
  bool consistent = true;
};

inline constexpr double kRouteConsistencyTolerance = 1e-7;

VhatResult vhat(const Frame& frame, std::span<const double> x,
                double tol = kDefaultRankTolerance);

/// dim V̂(x); equals k exactly where V is involutive.
int classify(const Frame& frame, std::span<const double> x,
             double tol = kDefaultRankTolerance);

/// max over i ∈ I(n,k-2) of |v ∧ ((div v) ⌐ dx_i)|; for k = 2 this is
/// |v ∧ div v|. Requires k >= 2 and is identically 0 when k = n.
double involutivity_residual(const Frame& frame, std::span<const double> x);

/// Uniform grid with `resolution` points per axis, endpoints included.
struct GridSpec {
  Box box;
  int resolution = 2;

  std::size_t size() const;
  /// Point with lexicographic index `flat` (first axis most significant).
  Point point(std::size_t flat) const;
};

struct PointClassification {
  Point x;
  std::optional<int> d;  // empty: frame degenerate at x
  double residual = 0.0;
  std::optional<double> weak_residual;  // |v ∧ div v|, k = 2 only
  bool route_consistent = true;
};

struct StratificationReport {
  GridSpec grid;
  int n = 0;
  int k = 0;
  std::vector<PointClassification> points;
  std::map<int, std::size_t> counts_by_d;
  std::size_t invalid = 0;
  std::size_t route_inconsistent = 0;

  /// Points of N(V): d > k.
  std::size_t non_involutive() const;
};

/// Classifies every grid point (lexicographic order, deterministic for any
/// thread count). Degenerate points are recorded as invalid.
StratificationReport stratify(const Frame& frame, const GridSpec& grid,
                              double tol = kDefaultRankTolerance,
                              unsigned threads = 0);

}  // namespace frobkit
