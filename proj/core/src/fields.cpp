#include "frobkit/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frobkit/error.hpp"

namespace frobkit {

Box Box::cube(int n, double lo, double hi) {
  return Box{std::vector<double>(n, lo), std::vector<double>(n, hi)};
}

Box Box::unbounded(int n) {
  const double inf = std::numeric_limits<double>::infinity();
  return cube(n, -inf, inf);
}

bool Box::contains(std::span<const double> x, double slack) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double tol = slack * std::max(1.0, std::abs(x[i]));
    if (!(x[i] >= lo[i] - tol && x[i] <= hi[i] + tol)) return false;
  }
  return true;
}

double Box::min_side() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lo.size(); ++i) m = std::min(m, hi[i] - lo[i]);
  return m;
}

Box Box::intersect(const Box& other) const {
  if (other.n() != n()) throw DimensionMismatch("boxes of different R^n");
  Box out = *this;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    out.lo[i] = std::max(lo[i], other.lo[i]);
    out.hi[i] = std::min(hi[i], other.hi[i]);
  }
  return out;
}

Point Box::center() const {
  Point c(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

bool Ball::contains(std::span<const double> x) const {
  double d2 = 0.0;
  for (std::size_t i = 0; i < center.size(); ++i) {
    d2 += (x[i] - center[i]) * (x[i] - center[i]);
  }
  return d2 < radius * radius;
}

bool Ball::inside(const Box& box, double margin) const {
  if (box.n() != static_cast<int>(center.size())) return false;
  for (std::size_t i = 0; i < center.size(); ++i) {
    if (center[i] - radius < box.lo[i] + margin ||
        center[i] + radius > box.hi[i] - margin) {
      return false;
    }
  }
  return true;
}

template <class Tag>
Field<Tag>::Field(int k, std::vector<Expr> components, Box domain,
                  std::vector<Ball> supports)
    : k_(k),
      components_(std::move(components)),
      domain_(std::move(domain)),
      supports_(std::move(supports)) {
  const int n = domain_.n();
  if (components_.size() != index_table(n, k).size()) {
    throw DimensionMismatch("a grade-" + std::to_string(k) + " field in R^" +
                            std::to_string(n) + " needs " +
                            std::to_string(binomial(n, k)) +
                            " components, got " +
                            std::to_string(components_.size()));
  }
  for (const auto& c : components_) {
    if (c.max_variable() >= n) {
      throw DimensionMismatch("component uses x" +
                              std::to_string(c.max_variable() + 1) +
                              " in R^" + std::to_string(n));
    }
  }
}

template <class Tag>
Field<Tag> Field<Tag>::constant(const Value& value, Box domain) {
  if (value.n() != domain.n()) throw DimensionMismatch("constant field");
  std::vector<Expr> comps(value.coeffs().begin(), value.coeffs().end());
  return Field(value.k(), std::move(comps), std::move(domain));
}

template <class Tag>
Field<Tag> Field<Tag>::zero(int n, int k, Box domain) {
  if (domain.n() != n) throw DimensionMismatch("zero field");
  return Field(k, std::vector<Expr>(binomial(n, k), Expr(0.0)),
               std::move(domain));
}

template <class Tag>
Field<Tag> Field<Tag>::scalar(Expr f, Box domain) {
  return Field(0, {std::move(f)}, std::move(domain));
}

template <class Tag>
typename Field<Tag>::Value Field<Tag>::eval(std::span<const double> x) const {
  if (!domain_.contains(x)) {
    throw DomainError("point outside the field's domain");
  }
  Value out(n(), k_);
  for (const auto& ball : supports_) {
    if (!ball.contains(x)) return out;
  }
  for (std::size_t p = 0; p < components_.size(); ++p) {
    out[p] = components_[p].evaluate(x);
  }
  return out;
}

template <class Tag>
Field<Tag> Field<Tag>::partial(int j) const {
  if (j < 1 || j > n()) {
    throw DimensionMismatch("partial derivative index outside 1..n");
  }
  std::vector<Expr> comps;
  comps.reserve(components_.size());
  for (const auto& c : components_) comps.push_back(c.derivative(j - 1));
  return Field(k_, std::move(comps), domain_, supports_);
}

template <class Tag>
Field<Tag> Field<Tag>::with_domain(Box domain) const {
  Field out = *this;
  if (domain.n() != n()) throw DimensionMismatch("with_domain");
  out.domain_ = std::move(domain);
  return out;
}

template <class Tag>
void Field<Tag>::check_compatible(const Field& other) const {
  if (other.n() != n()) throw DimensionMismatch("fields of different R^n");
  if (other.k_ != k_) throw GradeError("fields of different grades");
  const auto same_ball = [](const Ball& a, const Ball& b) {
    return a.center == b.center && a.radius == b.radius;
  };
  if (other.supports_.size() != supports_.size() ||
      !std::equal(supports_.begin(), supports_.end(),
                  other.supports_.begin(), same_ball)) {
    throw Error("sum of fields with different support cut-offs");
  }
}

template <class Tag>
Field<Tag>& Field<Tag>::operator+=(const Field& other) {
  check_compatible(other);
  for (std::size_t p = 0; p < components_.size(); ++p) {
    components_[p] += other.components_[p];
  }
  domain_ = domain_.intersect(other.domain_);
  return *this;
}

template <class Tag>
Field<Tag>& Field<Tag>::operator-=(const Field& other) {
  check_compatible(other);
  for (std::size_t p = 0; p < components_.size(); ++p) {
    components_[p] -= other.components_[p];
  }
  domain_ = domain_.intersect(other.domain_);
  return *this;
}

template class Field<VectorTag>;
template class Field<CovectorTag>;

namespace {

std::vector<Ball> merged_supports(const std::vector<Ball>& a,
                                  const std::vector<Ball>& b) {
  std::vector<Ball> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void check_same_space(const Box& a, const Box& b) {
  if (a.n() != b.n()) throw DimensionMismatch("fields of different R^n");
}

// out[I∪J] += sign(I,J) a_I b_J
std::vector<Expr> wedge_components(int n, int ka, const std::vector<Expr>& a,
                                   int kb, const std::vector<Expr>& b) {
  if (ka + kb > n) throw GradeError("wedge: grade exceeds the dimension");
  const auto& ta = index_table(n, ka);
  const auto& tb = index_table(n, kb);
  std::vector<Expr> out(binomial(n, ka + kb), Expr(0.0));
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (a[i].is_constant(0.0)) continue;
    for (std::size_t j = 0; j < tb.size(); ++j) {
      const int s = wedge_sign(ta[i], tb[j]);
      if (s == 0 || b[j].is_constant(0.0)) continue;
      auto& slot = out[index_position(n, ta[i] | tb[j])];
      slot = s > 0 ? slot + a[i] * b[j] : slot - a[i] * b[j];
    }
  }
  return out;
}

// (v ⌐ α)_J = Σ_I sign(I,J) α_I v_{I∪J}
std::vector<Expr> trace_components(int n, int kv, const std::vector<Expr>& v,
                                   int ha, const std::vector<Expr>& alpha) {
  if (ha > kv) throw GradeError("trace: covector grade exceeds vector grade");
  const auto& ta = index_table(n, ha);
  const auto& tout = index_table(n, kv - ha);
  std::vector<Expr> out(tout.size(), Expr(0.0));
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (alpha[i].is_constant(0.0)) continue;
    for (std::size_t j = 0; j < tout.size(); ++j) {
      const int s = wedge_sign(ta[i], tout[j]);
      if (s == 0) continue;
      const Expr term = alpha[i] * v[index_position(n, ta[i] | tout[j])];
      out[j] = s > 0 ? out[j] + term : out[j] - term;
    }
  }
  return out;
}

// (v ⌐′ α)_J = Σ_I sign(J,I) v_I α_{J∪I}
std::vector<Expr> antitrace_components(int n, int kv,
                                       const std::vector<Expr>& v, int ha,
                                       const std::vector<Expr>& alpha) {
  if (kv > ha) {
    throw GradeError("antitrace: vector grade exceeds covector grade");
  }
  const auto& tv = index_table(n, kv);
  const auto& tout = index_table(n, ha - kv);
  std::vector<Expr> out(tout.size(), Expr(0.0));
  for (std::size_t i = 0; i < tv.size(); ++i) {
    if (v[i].is_constant(0.0)) continue;
    for (std::size_t j = 0; j < tout.size(); ++j) {
      const int s = wedge_sign(tout[j], tv[i]);
      if (s == 0) continue;
      const Expr term = v[i] * alpha[index_position(n, tout[j] | tv[i])];
      out[j] = s > 0 ? out[j] + term : out[j] - term;
    }
  }
  return out;
}

}  // namespace

KVectorField wedge(const KVectorField& a, const KVectorField& b) {
  check_same_space(a.domain(), b.domain());
  return KVectorField(
      a.k() + b.k(),
      wedge_components(a.n(), a.k(), a.components(), b.k(), b.components()),
      a.domain().intersect(b.domain()),
      merged_supports(a.supports(), b.supports()));
}

KForm wedge(const KForm& a, const KForm& b) {
  check_same_space(a.domain(), b.domain());
  return KForm(
      a.k() + b.k(),
      wedge_components(a.n(), a.k(), a.components(), b.k(), b.components()),
      a.domain().intersect(b.domain()),
      merged_supports(a.supports(), b.supports()));
}

KVectorField trace(const KVectorField& v, const KForm& alpha) {
  check_same_space(v.domain(), alpha.domain());
  return KVectorField(v.k() - alpha.k(),
                      trace_components(v.n(), v.k(), v.components(),
                                       alpha.k(), alpha.components()),
                      v.domain().intersect(alpha.domain()),
                      merged_supports(v.supports(), alpha.supports()));
}

KForm antitrace(const KVectorField& v, const KForm& alpha) {
  check_same_space(v.domain(), alpha.domain());
  return KForm(alpha.k() - v.k(),
               antitrace_components(v.n(), v.k(), v.components(), alpha.k(),
                                    alpha.components()),
               v.domain().intersect(alpha.domain()),
               merged_supports(v.supports(), alpha.supports()));
}

KForm star_vec(const KVectorField& v) {
  const int n = v.n();
  std::vector<Expr> out(binomial(n, n - v.k()), Expr(0.0));
  const auto& table = index_table(n, v.k());
  const auto full = static_cast<IndexMask>((1u << n) - 1);
  for (std::size_t p = 0; p < table.size(); ++p) {
    const auto comp = static_cast<IndexMask>(full & ~table[p]);
    const int s = wedge_sign(comp, table[p]);
    out[index_position(n, comp)] =
        s > 0 ? v.component(p) : -v.component(p);
  }
  return KForm(n - v.k(), std::move(out), v.domain(), v.supports());
}

KVectorField star_covec(const KForm& alpha) {
  const int n = alpha.n();
  std::vector<Expr> out(binomial(n, n - alpha.k()), Expr(0.0));
  const auto& table = index_table(n, alpha.k());
  const auto full = static_cast<IndexMask>((1u << n) - 1);
  for (std::size_t p = 0; p < table.size(); ++p) {
    const auto comp = static_cast<IndexMask>(full & ~table[p]);
    const int s = wedge_sign(table[p], comp);
    out[index_position(n, comp)] =
        s > 0 ? alpha.component(p) : -alpha.component(p);
  }
  return KVectorField(n - alpha.k(), std::move(out), alpha.domain(),
                      alpha.supports());
}

KForm pair(const KVectorField& v, const KForm& alpha) {
  check_same_space(v.domain(), alpha.domain());
  if (v.k() != alpha.k()) throw GradeError("pair: grades differ");
  Expr sum(0.0);
  for (std::size_t p = 0; p < v.components().size(); ++p) {
    sum += v.component(p) * alpha.component(p);
  }
  return KForm(0, {sum}, v.domain().intersect(alpha.domain()),
               merged_supports(v.supports(), alpha.supports()));
}

KForm exterior_derivative(const KForm& omega) {
  const int n = omega.n();
  const int k = omega.k();
  if (k >= n) throw GradeError("exterior derivative of a top-degree form");
  const auto& table = index_table(n, k);
  std::vector<Expr> out(binomial(n, k + 1), Expr(0.0));
  for (std::size_t p = 0; p < table.size(); ++p) {
    for (int j = 0; j < n; ++j) {
      const auto dxj = static_cast<IndexMask>(1u << j);
      const int s = wedge_sign(dxj, table[p]);
      if (s == 0) continue;
      const Expr d = omega.component(p).derivative(j);
      if (d.is_constant(0.0)) continue;
      auto& slot = out[index_position(n, dxj | table[p])];
      slot = s > 0 ? slot + d : slot - d;
    }
  }
  return KForm(k + 1, std::move(out), omega.domain(), omega.supports());
}

KVectorField divergence(const KVectorField& v) {
  const int n = v.n();
  const int k = v.k();
  if (k < 1) throw GradeError("divergence of a scalar field");
  const auto& table = index_table(n, k);
  const auto& tout = index_table(n, k - 1);
  std::vector<Expr> out(tout.size(), Expr(0.0));
  // e_I ⌐ dx_j = sign(j, I∖j) e_{I∖j} when j ∈ I.
  for (std::size_t p = 0; p < table.size(); ++p) {
    for (int j = 0; j < n; ++j) {
      const auto dxj = static_cast<IndexMask>(1u << j);
      if (!(table[p] & dxj)) continue;
      const auto rest = static_cast<IndexMask>(table[p] & ~dxj);
      const int s = wedge_sign(dxj, rest);
      const Expr d = v.component(p).derivative(j);
      if (d.is_constant(0.0)) continue;
      auto& slot = out[index_position(n, rest)];
      slot = s > 0 ? slot + d : slot - d;
    }
  }
  return KVectorField(k - 1, std::move(out), v.domain(), v.supports());
}

KVectorField lie_bracket(const KVectorField& v, const KVectorField& w) {
  check_same_space(v.domain(), w.domain());
  if (v.k() != 1 || w.k() != 1) {
    throw GradeError("Lie bracket of non-vector fields");
  }
  const int n = v.n();
  std::vector<Expr> out(n, Expr(0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out[i] += v.component(j) * w.component(i).derivative(j) -
                w.component(j) * v.component(i).derivative(j);
    }
  }
  return KVectorField(1, std::move(out), v.domain().intersect(w.domain()),
                      merged_supports(v.supports(), w.supports()));
}

MultiVector cartan_divergence(std::span<const KVectorField> factors,
                              std::span<const double> x) {
  const int k = static_cast<int>(factors.size());
  if (k < 2) throw GradeError("Cartan's formula needs at least two factors");
  const int n = factors[0].n();
  std::vector<MultiVector> values;
  values.reserve(k);
  for (const auto& f : factors) values.push_back(f.eval(x));

  auto wedge_except = [&](int skip_a, int skip_b) {
    MultiVector acc = MultiVector::scalar(n, 1.0);
    for (int j = 0; j < k; ++j) {
      if (j != skip_a && j != skip_b) acc = wedge(acc, values[j]);
    }
    return acc;
  };

  MultiVector out(n, k - 1);
  for (int i = 0; i < k; ++i) {
    const double div_i = divergence(factors[i]).eval(x)[0];
    const double sign = i % 2 == 0 ? 1.0 : -1.0;  // (-1)^{i-1}, 1-based i
    out += (sign * div_i) * wedge_except(i, -1);
  }
  for (int i = 0; i < k; ++i) {
    for (int ip = i + 1; ip < k; ++ip) {
      // (-1)^{i+i'-1} with 1-based indices equals (-1)^{i+i'+1} 0-based.
      const double sign = (i + ip + 1) % 2 == 0 ? 1.0 : -1.0;
      const MultiVector bracket =
          lie_bracket(factors[i], factors[ip]).eval(x);
      out += sign * wedge(bracket, wedge_except(i, ip));
    }
  }
  return out;
}

Expr bump_profile(const Point& center, double radius) {
  Expr s2(0.0);
  for (std::size_t i = 0; i < center.size(); ++i) {
    s2 += pow(Expr::variable(static_cast<int>(i)) - Expr(center[i]), 2);
  }
  return pow(Expr(1.0) - s2 * Expr(1.0 / (radius * radius)), 3);
}

KForm bump_form(const Box& domain, const Point& center, double radius,
                const MultiCovector& direction, const Expr& amplitude) {
  const int n = domain.n();
  if (static_cast<int>(center.size()) != n || direction.n() != n) {
    throw DimensionMismatch("bump_form: center/direction dimension");
  }
  if (!(radius > 0.0)) throw DomainError("bump_form: radius must be positive");
  Ball ball{center, radius};
  if (!ball.inside(domain)) {
    throw DomainError("bump_form: ball B(c,r) leaves the domain");
  }
  const Expr profile = amplitude * bump_profile(center, radius);
  std::vector<Expr> comps;
  comps.reserve(direction.size());
  for (std::size_t p = 0; p < direction.size(); ++p) {
    comps.push_back(direction[p] == 0.0 ? Expr(0.0)
                                        : Expr(direction[p]) * profile);
  }
  return KForm(direction.k(), std::move(comps), domain, {std::move(ball)});
}

double bump_integral(int n, double radius) {
  const double pi = std::acos(-1.0);
  return std::pow(radius, n) * std::pow(pi, 0.5 * n) * 6.0 /
         std::tgamma(0.5 * n + 4.0);
}

}  // namespace frobkit
