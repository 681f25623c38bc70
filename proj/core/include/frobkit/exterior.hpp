#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "frobkit/multi_index.hpp"
#include "frobkit/subspace.hpp"

namespace frobkit {

struct VectorTag {};
struct CovectorTag {};

/// Dense element of Λ_k(R^n) (VectorTag) or Λ^k(R^n) (CovectorTag).
///
/// Coefficients are stored position-aligned with index_table(n, k), so the
/// canonical bases e_I and dx_I are dual-orthonormal under pair().
template <class Tag>
class Graded {
 public:
  Graded(int n, int k);
  Graded(int n, int k, std::vector<double> coeffs);

  static Graded scalar(int n, double value);

  /// coeff * e_{i_1} ∧ ... ∧ e_{i_k} for indices in any order; repeated
  /// indices give zero and unsorted ones pick up the permutation sign.
  static Graded basis(int n, std::vector<int> indices, double coeff = 1.0);

  /// e_1 ∧ ... ∧ e_n, respectively dx_1 ∧ ... ∧ dx_n.
  static Graded volume(int n);

  int n() const { return n_; }
  int k() const { return k_; }
  std::size_t size() const { return coeffs_.size(); }

  double operator[](std::size_t pos) const { return coeffs_[pos]; }
  double& operator[](std::size_t pos) { return coeffs_[pos]; }
  double coeff(const MultiIndex& index) const;
  std::span<const double> coeffs() const { return coeffs_; }

  /// Euclidean norm of the coefficient array.
  double norm() const;
  double max_abs() const;

  Graded& operator+=(const Graded& other);
  Graded& operator-=(const Graded& other);
  Graded& operator*=(double s);

  friend Graded operator+(Graded a, const Graded& b) { return a += b; }
  friend Graded operator-(Graded a, const Graded& b) { return a -= b; }
  friend Graded operator*(double s, Graded a) { return a *= s; }
  friend Graded operator*(Graded a, double s) { return a *= s; }
  friend Graded operator-(Graded a) { return a *= -1.0; }
  friend bool operator==(const Graded& a, const Graded& b) = default;

  std::string to_string() const;

 private:
  void check_same_shape(const Graded& other) const;

  int n_;
  int k_;
  std::vector<double> coeffs_;
};

using MultiVector = Graded<VectorTag>;
using MultiCovector = Graded<CovectorTag>;

extern template class Graded<VectorTag>;
extern template class Graded<CovectorTag>;

MultiVector wedge(const MultiVector& a, const MultiVector& b);
MultiCovector wedge(const MultiCovector& a, const MultiCovector& b);

/// ⟨v, α⟩ for equal grades.
double pair(const MultiVector& v, const MultiCovector& alpha);

/// v ⌐ α: the (k-h)-vector with ⟨v⌐α, β⟩ = ⟨v, α∧β⟩.
MultiVector trace(const MultiVector& v, const MultiCovector& alpha);

/// v ⌐′ α: the (h-k)-covector with ⟨w, v⌐′α⟩ = ⟨w∧v, α⟩.
MultiCovector antitrace(const MultiVector& v, const MultiCovector& alpha);

/// ★v = v ⌐′ dx, computed from the basis formula ★e_I = sign(J,I) dx_J.
MultiCovector star_vec(const MultiVector& v);

/// ★α = e ⌐ α, computed from ★dx_I = sign(I,J) e_J.
MultiVector star_covec(const MultiCovector& alpha);

/// Orthonormal basis of span(v) = {v ⌐ β : β ∈ Λ^{k-1}}, with relative
/// singular-value cutoff `tol`. span(0) and span(scalar) are {0}.
Subspace span_of(const MultiVector& v, double tol = kDefaultRankTolerance);

/// dim span(v) == k. Throws Error on the zero vector.
bool is_simple(const MultiVector& v, double tol = kDefaultRankTolerance);

}  // namespace frobkit
