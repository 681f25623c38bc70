#pragma once

#include <Eigen/Dense>
#include <span>

#include "frobkit/fields.hpp"

namespace frobkit {

/// Flow generated by a grade-1 field, integrated with the classical
/// fourth-order Runge-Kutta scheme at a fixed step (no adaptivity).
class FlowSpec {
 public:
  explicit FlowSpec(KVectorField field, double step = 1e-3);

  const KVectorField& field() const { return field_; }
  double step() const { return step_; }

  Eigen::VectorXd velocity(std::span<const double> x) const;
  /// d_x v as an n x n matrix (row i: ∂v_i/∂x_j).
  Eigen::MatrixXd velocity_jacobian(std::span<const double> x) const;

 private:
  KVectorField field_;
  double step_;
  std::vector<Expr> partials_;  // row-major n x n
};

/// Point Φ(t,x) together with the spatial Jacobian d_xΦ(t,x), the latter
/// integrated through the variational equation dJ/dt = (d v)(Φ) J.
struct FlowState {
  Eigen::VectorXd x;
  Eigen::MatrixXd jacobian;
};

/// Φ(t, x). Uses ceil(|t|/step) equal substeps so t is hit exactly.
/// Throws TrajectoryExit if a stage leaves the field's domain.
Point flow(const FlowSpec& spec, double t, std::span<const double> x);

FlowState flow_with_jacobian(const FlowSpec& spec, double t,
                             std::span<const double> x);

/// Continues an already integrated state by dt.
FlowState advance(const FlowSpec& spec, FlowState state, double dt);

/// Induced action of a linear map on k-vectors: J_#(v_1∧…∧v_k) =
/// Jv_1∧…∧Jv_k, extended linearly (the k-th compound matrix).
MultiVector pushforward_kvector(const Eigen::MatrixXd& jacobian,
                                const MultiVector& v);

}  // namespace frobkit
