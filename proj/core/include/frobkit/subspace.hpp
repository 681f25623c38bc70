#pragma once

#include <Eigen/Dense>

namespace frobkit {

/// Relative singular-value cutoff shared by every rank decision.
inline constexpr double kDefaultRankTolerance = 1e-9;

/// A linear subspace of R^n held through an orthonormal basis (columns).
class Subspace {
 public:
  /// The zero subspace of R^n.
  explicit Subspace(int n);

  /// Column space of `generators`, dropping singular values
  /// <= rel_tol * (largest singular value).
  static Subspace from_columns(const Eigen::MatrixXd& generators,
                               double rel_tol = kDefaultRankTolerance);

  /// Wraps an already orthonormal basis; throws if columns are not
  /// orthonormal to 1e-12.
  static Subspace from_orthonormal(Eigen::MatrixXd basis);

  int n() const { return static_cast<int>(basis_.rows()); }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }

  /// Orthogonal projection onto the subspace.
  Eigen::VectorXd project(const Eigen::VectorXd& x) const;

  /// Largest sine of the principal angles between this subspace and
  /// `outer`, i.e. |(I - P_outer) Q|_2. Zero iff this ⊂ outer.
  double containment_residual(const Subspace& outer) const;

 private:
  explicit Subspace(Eigen::MatrixXd basis) : basis_(std::move(basis)) {}

  Eigen::MatrixXd basis_;
};

/// a + b, with the same relative rank cutoff as from_columns.
Subspace sum(const Subspace& a, const Subspace& b,
             double rel_tol = kDefaultRankTolerance);

/// 1 when the dimensions differ, otherwise the largest principal-angle sine.
double subspace_distance(const Subspace& a, const Subspace& b);

}  // namespace frobkit
