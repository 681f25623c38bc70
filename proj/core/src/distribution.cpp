#include "frobkit/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "frobkit/error.hpp"
#include "frobkit/parallel.hpp"

namespace frobkit {
namespace {

KVectorField wedge_all(const std::vector<KVectorField>& vectors) {
  KVectorField acc = vectors.front();
  for (std::size_t i = 1; i < vectors.size(); ++i) {
    acc = frobkit::wedge(acc, vectors[i]);
  }
  return acc;
}

std::vector<KVectorField> require_nonempty(std::vector<KVectorField> v) {
  if (v.empty()) throw GradeError("empty frame");
  return v;
}

Eigen::MatrixXd columns_of(const std::vector<MultiVector>& vs, int n) {
  Eigen::MatrixXd m(n, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t c = 0; c < vs.size(); ++c) {
    for (int r = 0; r < n; ++r) m(r, static_cast<Eigen::Index>(c)) = vs[c][r];
  }
  return m;
}

Eigen::MatrixXd append(const Subspace& base, const Eigen::MatrixXd& extra) {
  Eigen::MatrixXd gens(base.n(), base.dim() + extra.cols());
  gens << base.basis(), extra;
  return gens;
}

}  // namespace

Frame::Frame(std::vector<KVectorField> vectors)
    : vectors_(require_nonempty(std::move(vectors))),
      domain_(vectors_.front().domain()),
      wedge_(wedge_all(vectors_)),
      divergence_(frobkit::divergence(wedge_)) {
  for (const auto& v : vectors_) {
    if (v.k() != 1) throw GradeError("frame members must be vectorfields");
    if (v.n() != n()) throw DimensionMismatch("frame members in different R^n");
    domain_ = domain_.intersect(v.domain());
  }
  if (k() > n()) throw GradeError("more frame vectors than dimensions");
  for (int i = 0; i < k(); ++i) {
    for (int j = i + 1; j < k(); ++j) {
      brackets_.push_back(lie_bracket(vectors_[i], vectors_[j]));
    }
  }
}

const KVectorField& Frame::bracket(int i, int j) const {
  if (!(0 <= i && i < j && j < k())) throw Error("bracket index out of range");
  // Row i of the strict upper triangle starts after Σ_{r<i} (k-1-r) entries.
  const int offset = i * (2 * k() - i - 1) / 2 + (j - i - 1);
  return brackets_[static_cast<std::size_t>(offset)];
}

MultiVector Frame::value(std::span<const double> x) const {
  MultiVector acc = vectors_.front().eval(x);
  for (std::size_t i = 1; i < vectors_.size(); ++i) {
    acc = frobkit::wedge(acc, vectors_[i].eval(x));
  }
  return acc;
}

Subspace Frame::plane(std::span<const double> x, double tol) const {
  if (value(x).norm() < kDegenerateNorm) {
    throw DegenerateFrame("frame degenerates: |v(x)| < 1e-12");
  }
  std::vector<MultiVector> cols;
  for (const auto& v : vectors_) cols.push_back(v.eval(x));
  return Subspace::from_columns(columns_of(cols, n()), tol);
}

VhatResult vhat(const Frame& frame, std::span<const double> x, double tol) {
  const int n = frame.n();
  const int k = frame.k();
  const Subspace v_plane = frame.plane(x, tol);

  std::vector<MultiVector> brackets;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) brackets.push_back(frame.bracket(i, j).eval(x));
  }
  Subspace by_brackets =
      Subspace::from_columns(append(v_plane, columns_of(brackets, n)), tol);

  // span(div v) = {(div v) ⌐ β : β ∈ Λ^{k-2}}; the generators are kept
  // unnormalised so both routes judge magnitudes against the same unit
  // basis of V(x).
  std::vector<MultiVector> div_gens;
  if (k >= 2) {
    const MultiVector div_v = frame.divergence().eval(x);
    const auto& table = index_table(n, k - 2);
    for (std::size_t p = 0; p < table.size(); ++p) {
      MultiCovector beta(n, k - 2);
      beta[p] = 1.0;
      div_gens.push_back(trace(div_v, beta));
    }
  }
  Subspace by_divergence =
      Subspace::from_columns(append(v_plane, columns_of(div_gens, n)), tol);

  VhatResult out{std::move(by_brackets), std::move(by_divergence), 0.0, true};
  out.route_residual = subspace_distance(out.space, out.alternate);
  out.consistent = out.route_residual <= kRouteConsistencyTolerance;
  return out;
}

int classify(const Frame& frame, std::span<const double> x, double tol) {
  return vhat(frame, x, tol).space.dim();
}

double involutivity_residual(const Frame& frame, std::span<const double> x) {
  const int n = frame.n();
  const int k = frame.k();
  if (k < 2) throw GradeError("involutivity residual needs k >= 2");
  const MultiVector v = frame.value(x);
  if (v.norm() < Frame::kDegenerateNorm) {
    throw DegenerateFrame("frame degenerates: |v(x)| < 1e-12");
  }
  if (k == n) return 0.0;
  const MultiVector div_v = frame.divergence().eval(x);
  double worst = 0.0;
  const auto& table = index_table(n, k - 2);
  for (std::size_t p = 0; p < table.size(); ++p) {
    MultiCovector dx_i(n, k - 2);
    dx_i[p] = 1.0;
    worst = std::max(worst, wedge(v, trace(div_v, dx_i)).norm());
  }
  return worst;
}

std::size_t GridSpec::size() const {
  std::size_t total = 1;
  for (int i = 0; i < box.n(); ++i) total *= static_cast<std::size_t>(resolution);
  return total;
}

Point GridSpec::point(std::size_t flat) const {
  if (resolution < 2) throw Error("grid resolution must be at least 2");
  const int n = box.n();
  Point x(static_cast<std::size_t>(n));
  for (int axis = n - 1; axis >= 0; --axis) {
    const auto i = static_cast<int>(flat % static_cast<std::size_t>(resolution));
    flat /= static_cast<std::size_t>(resolution);
    const double t = static_cast<double>(i) / (resolution - 1);
    // Endpoint-exact parametrisation keeps symmetric grids symmetric.
    x[static_cast<std::size_t>(axis)] =
        (i == resolution - 1) ? box.hi[axis]
                              : box.lo[axis] + t * (box.hi[axis] - box.lo[axis]);
    if (2 * i == resolution - 1) {
      x[static_cast<std::size_t>(axis)] = 0.5 * (box.lo[axis] + box.hi[axis]);
    }
  }
  return x;
}

std::size_t StratificationReport::non_involutive() const {
  std::size_t total = 0;
  for (const auto& [d, count] : counts_by_d) {
    if (d > k) total += count;
  }
  return total;
}

StratificationReport stratify(const Frame& frame, const GridSpec& grid,
                              double tol, unsigned threads) {
  if (grid.box.n() != frame.n()) throw DimensionMismatch("grid dimension");
  if (grid.resolution < 2) throw Error("grid resolution must be at least 2");
  StratificationReport report;
  report.grid = grid;
  report.n = frame.n();
  report.k = frame.k();
  report.points.resize(grid.size());
  parallel_for(
      report.points.size(),
      [&](std::size_t i) {
        PointClassification& rec = report.points[i];
        rec.x = grid.point(i);
        try {
          const VhatResult vh = vhat(frame, rec.x, tol);
          rec.d = vh.space.dim();
          rec.route_consistent = vh.consistent;
          if (frame.k() >= 2) {
            rec.residual = involutivity_residual(frame, rec.x);
          }
          if (frame.k() == 2) {
            rec.weak_residual =
                frame.n() > 2 ? wedge(frame.value(rec.x),
                                      frame.divergence().eval(rec.x))
                                    .norm()
                              : 0.0;
          }
        } catch (const DegenerateFrame&) {
          rec.d.reset();
        }
      },
      threads);
  for (const auto& rec : report.points) {
    if (!rec.d) {
      ++report.invalid;
      continue;
    }
    ++report.counts_by_d[*rec.d];
    if (!rec.route_consistent) ++report.route_inconsistent;
  }
  return report;
}

}  // namespace frobkit
