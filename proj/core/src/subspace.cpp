#include "frobkit/subspace.hpp"

#include <algorithm>
#include <cmath>

#include "frobkit/error.hpp"

namespace frobkit {

Subspace::Subspace(int n) : basis_(n, 0) {}

Subspace Subspace::from_columns(const Eigen::MatrixXd& generators,
                                double rel_tol) {
  const auto n = generators.rows();
  if (generators.cols() == 0) return Subspace(static_cast<int>(n));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(generators, Eigen::ComputeThinU);
  const auto& sigma = svd.singularValues();
  const double top = sigma.size() > 0 ? sigma(0) : 0.0;
  if (!(top > 0.0)) return Subspace(static_cast<int>(n));
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > rel_tol * top) ++rank;
  return Subspace(Eigen::MatrixXd(svd.matrixU().leftCols(rank)));
}

Subspace Subspace::from_orthonormal(Eigen::MatrixXd basis) {
  const Eigen::MatrixXd gram = basis.transpose() * basis;
  const Eigen::MatrixXd id =
      Eigen::MatrixXd::Identity(basis.cols(), basis.cols());
  if (basis.cols() > 0 && (gram - id).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error("subspace basis is not orthonormal");
  }
  return Subspace(std::move(basis));
}

Eigen::VectorXd Subspace::project(const Eigen::VectorXd& x) const {
  if (x.size() != basis_.rows()) {
    throw DimensionMismatch("projection of a vector of the wrong size");
  }
  return basis_ * (basis_.transpose() * x);
}

double Subspace::containment_residual(const Subspace& outer) const {
  if (outer.n() != n()) throw DimensionMismatch("subspaces of different R^n");
  if (dim() == 0) return 0.0;
  const Eigen::MatrixXd rest =
      basis_ - outer.basis_ * (outer.basis_.transpose() * basis_);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rest);
  return std::min(1.0, svd.singularValues()(0));
}

Subspace sum(const Subspace& a, const Subspace& b, double rel_tol) {
  if (a.n() != b.n()) throw DimensionMismatch("subspaces of different R^n");
  Eigen::MatrixXd gens(a.n(), a.dim() + b.dim());
  gens << a.basis(), b.basis();
  return Subspace::from_columns(gens, rel_tol);
}

double subspace_distance(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim()) return 1.0;
  return std::max(a.containment_residual(b), b.containment_residual(a));
}

}  // namespace frobkit
