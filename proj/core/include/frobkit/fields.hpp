#pragma once

#include <span>
#include <vector>

#include "frobkit/exterior.hpp"
#include "frobkit/expr.hpp"

namespace frobkit {

using Point = std::vector<double>;

/// Axis-aligned box [lo_1,hi_1] x ... x [lo_n,hi_n]; infinite bounds allowed.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box cube(int n, double lo, double hi);
  static Box unbounded(int n);

  int n() const { return static_cast<int>(lo.size()); }
  bool contains(std::span<const double> x, double slack = 1e-12) const;
  double min_side() const;
  Box intersect(const Box& other) const;
  Point center() const;
};

/// Open Euclidean ball.
struct Ball {
  Point center;
  double radius = 0.0;

  bool contains(std::span<const double> x) const;
  /// The closed ball lies in the box shrunk by `margin` on every side.
  bool inside(const Box& box, double margin = 0.0) const;
};

/// A k-vectorfield (VectorTag) or k-form (CovectorTag) on a box.
///
/// Components are expressions over x_1..x_n, one per multi-index of
/// I(n,k). Fields produced by bump_form() additionally carry support balls:
/// values are zero outside every listed ball. Bump profiles vanish to second
/// order on the sphere, so the cut-off commutes with one differentiation.
template <class Tag>
class Field {
 public:
  using Value = Graded<Tag>;

  Field(int k, std::vector<Expr> components, Box domain,
        std::vector<Ball> supports = {});

  static Field constant(const Value& value, Box domain);
  static Field zero(int n, int k, Box domain);
  static Field scalar(Expr f, Box domain);

  int n() const { return domain_.n(); }
  int k() const { return k_; }
  const Box& domain() const { return domain_; }
  const std::vector<Expr>& components() const { return components_; }
  const Expr& component(std::size_t position) const {
    return components_[position];
  }
  const std::vector<Ball>& supports() const { return supports_; }

  /// Componentwise evaluation. Throws DomainError outside the box.
  Value eval(std::span<const double> x) const;

  /// Symbolic ∂/∂x_j, 1 <= j <= n.
  Field partial(int j) const;

  Field with_domain(Box domain) const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator-(Field a) { return a * Expr(-1.0); }
  /// Multiplication by a scalar function.
  friend Field operator*(Field a, const Expr& f) {
    for (auto& c : a.components_) c = c * f;
    return a;
  }
  friend Field operator*(const Expr& f, Field a) { return std::move(a) * f; }

 private:
  void check_compatible(const Field& other) const;

  int k_;
  std::vector<Expr> components_;
  Box domain_;
  std::vector<Ball> supports_;
};

using KVectorField = Field<VectorTag>;
using KForm = Field<CovectorTag>;

extern template class Field<VectorTag>;
extern template class Field<CovectorTag>;

/// Symbolic counterparts of the pointwise algebra.
KVectorField wedge(const KVectorField& a, const KVectorField& b);
KForm wedge(const KForm& a, const KForm& b);
KVectorField trace(const KVectorField& v, const KForm& alpha);
KForm antitrace(const KVectorField& v, const KForm& alpha);
KForm star_vec(const KVectorField& v);
KVectorField star_covec(const KForm& alpha);
/// ⟨v, α⟩ as a 0-form.
KForm pair(const KVectorField& v, const KForm& alpha);

/// dω = Σ_I Σ_j ∂ω_I/∂x_j dx_j ∧ dx_I.
KForm exterior_derivative(const KForm& omega);

/// div v = Σ_I Σ_j ∂v_I/∂x_j e_I ⌐ dx_j.
KVectorField divergence(const KVectorField& v);

/// [v, w] = d_x w (v) - d_x v (w) for grade-1 fields.
KVectorField lie_bracket(const KVectorField& v, const KVectorField& w);

/// Cartan's expansion of div(v_1 ∧ ... ∧ v_k) evaluated at x (k >= 2):
///   Σ_i (-1)^{i-1} (div v_i) ⋀_{j≠i} v_j
///   + Σ_{i<i'} (-1)^{i+i'-1} [v_i, v_i'] ∧ ⋀_{j≠i,i'} v_j.
MultiVector cartan_divergence(std::span<const KVectorField> factors,
                              std::span<const double> x);

/// amplitude(x) (1 - |x-c|²/r²)³ direction on B(c,r), zero outside.
/// Throws DomainError if the closed ball is not inside `domain`.
KForm bump_form(const Box& domain, const Point& center, double radius,
                const MultiCovector& direction, const Expr& amplitude = 1.0);

/// Scalar bump profile (1 - |x-c|²/r²)³ as an expression (no cut-off).
Expr bump_profile(const Point& center, double radius);

/// Closed-form ∫ (1 - |x-c|²/r²)³ dx over B(c,r) in R^n.
double bump_integral(int n, double radius);

}  // namespace frobkit
