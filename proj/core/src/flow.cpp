#include "frobkit/flow.hpp"

#include <cmath>

#include "frobkit/error.hpp"

namespace frobkit {

FlowSpec::FlowSpec(KVectorField field, double step)
    : field_(std::move(field)), step_(step) {
  if (field_.k() != 1) throw GradeError("a flow needs a grade-1 field");
  if (!(step_ > 0.0)) throw Error("flow step must be positive");
  const int n = field_.n();
  partials_.reserve(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      partials_.push_back(field_.component(i).derivative(j));
    }
  }
}

Eigen::VectorXd FlowSpec::velocity(std::span<const double> x) const {
  if (!field_.domain().contains(x)) {
    throw TrajectoryExit("flow trajectory left the field's domain");
  }
  const MultiVector v = field_.eval(x);
  return Eigen::Map<const Eigen::VectorXd>(v.coeffs().data(), field_.n());
}

Eigen::MatrixXd FlowSpec::velocity_jacobian(std::span<const double> x) const {
  const int n = field_.n();
  Eigen::MatrixXd jac(n, n);
  bool inside = true;
  for (const auto& ball : field_.supports()) inside = inside && ball.contains(x);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      jac(i, j) = inside ? partials_[static_cast<std::size_t>(i * n + j)]
                               .evaluate(x)
                         : 0.0;
    }
  }
  return jac;
}

namespace {

std::span<const double> as_span(const Eigen::VectorXd& x) {
  return {x.data(), static_cast<std::size_t>(x.size())};
}

FlowState rk4_step(const FlowSpec& spec, const FlowState& s, double h,
                   bool with_jacobian) {
  auto rhs = [&](const Eigen::VectorXd& x, const Eigen::MatrixXd& jac,
                 Eigen::VectorXd& dx, Eigen::MatrixXd& djac) {
    dx = spec.velocity(as_span(x));
    if (with_jacobian) djac = spec.velocity_jacobian(as_span(x)) * jac;
  };
  Eigen::VectorXd k1, k2, k3, k4;
  Eigen::MatrixXd j1, j2, j3, j4;
  rhs(s.x, s.jacobian, k1, j1);
  rhs(s.x + 0.5 * h * k1,
      with_jacobian ? Eigen::MatrixXd(s.jacobian + 0.5 * h * j1) : s.jacobian,
      k2, j2);
  rhs(s.x + 0.5 * h * k2,
      with_jacobian ? Eigen::MatrixXd(s.jacobian + 0.5 * h * j2) : s.jacobian,
      k3, j3);
  rhs(s.x + h * k3,
      with_jacobian ? Eigen::MatrixXd(s.jacobian + h * j3) : s.jacobian, k4,
      j4);
  FlowState out;
  out.x = s.x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  out.jacobian = with_jacobian
                     ? Eigen::MatrixXd(s.jacobian +
                                       (h / 6.0) * (j1 + 2.0 * j2 + 2.0 * j3 + j4))
                     : s.jacobian;
  if (!spec.field().domain().contains(as_span(out.x))) {
    throw TrajectoryExit("flow trajectory left the field's domain");
  }
  return out;
}

FlowState integrate(const FlowSpec& spec, FlowState state, double t,
                    bool with_jacobian) {
  if (t == 0.0) return state;
  const auto steps =
      static_cast<long>(std::ceil(std::abs(t) / spec.step() - 1e-9));
  const double h = t / static_cast<double>(std::max(1L, steps));
  for (long i = 0; i < std::max(1L, steps); ++i) {
    state = rk4_step(spec, state, h, with_jacobian);
  }
  return state;
}

FlowState initial_state(const FlowSpec& spec, std::span<const double> x) {
  const int n = spec.field().n();
  if (static_cast<int>(x.size()) != n) {
    throw DimensionMismatch("flow start point has the wrong dimension");
  }
  if (!spec.field().domain().contains(x)) {
    throw TrajectoryExit("flow starts outside the field's domain");
  }
  FlowState s;
  s.x = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  s.jacobian = Eigen::MatrixXd::Identity(n, n);
  return s;
}

}  // namespace

Point flow(const FlowSpec& spec, double t, std::span<const double> x) {
  const FlowState s = integrate(spec, initial_state(spec, x), t, false);
  return Point(s.x.data(), s.x.data() + s.x.size());
}

FlowState flow_with_jacobian(const FlowSpec& spec, double t,
                             std::span<const double> x) {
  return integrate(spec, initial_state(spec, x), t, true);
}

FlowState advance(const FlowSpec& spec, FlowState state, double dt) {
  return integrate(spec, std::move(state), dt, true);
}

MultiVector pushforward_kvector(const Eigen::MatrixXd& jacobian,
                                const MultiVector& v) {
  const int n = v.n();
  if (jacobian.rows() != n || jacobian.cols() != n) {
    throw DimensionMismatch("pushforward: matrix size");
  }
  const int k = v.k();
  MultiVector out(n, k);
  if (k == 0) {
    out[0] = v[0];
    return out;
  }
  const auto& table = index_table(n, k);
  std::vector<std::vector<int>> members;
  members.reserve(table.size());
  for (IndexMask m : table) {
    std::vector<int> idx;
    for (int j = 0; j < n; ++j) {
      if (m & (1u << j)) idx.push_back(j);
    }
    members.push_back(std::move(idx));
  }
  Eigen::MatrixXd minor(k, k);
  for (std::size_t col = 0; col < table.size(); ++col) {
    if (v[col] == 0.0) continue;
    for (std::size_t row = 0; row < table.size(); ++row) {
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
          minor(a, b) = jacobian(members[row][a], members[col][b]);
        }
      }
      out[row] += v[col] * minor.determinant();
    }
  }
  return out;
}

}  // namespace frobkit
