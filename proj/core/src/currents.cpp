#include "frobkit/currents.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "frobkit/error.hpp"
#include "frobkit/parallel.hpp"

namespace frobkit {

SupportHint support_hint(const KForm& form) {
  if (form.supports().empty()) return std::nullopt;
  return form.supports();
}

SupportHint support_hint(std::span<const KForm> forms) {
  std::vector<Ball> balls;
  for (const auto& f : forms) {
    if (f.supports().empty()) return std::nullopt;
    balls.insert(balls.end(), f.supports().begin(), f.supports().end());
  }
  return balls;
}

SupportHint merge_hints(const SupportHint& a, const SupportHint& b) {
  if (!a) return b;
  if (!b) return a;
  std::vector<Ball> balls = *a;
  balls.insert(balls.end(), b->begin(), b->end());
  return balls;
}

namespace {

bool in_any(const std::vector<Ball>& balls, std::span<const double> x) {
  return std::any_of(balls.begin(), balls.end(),
                     [&](const Ball& b) { return b.contains(x); });
}

// Closed ball meets the box.
bool ball_meets_box(const Ball& ball, const Box& box) {
  double d2 = 0.0;
  for (int i = 0; i < box.n(); ++i) {
    const double c = ball.center[i];
    const double gap = std::max({box.lo[i] - c, 0.0, c - box.hi[i]});
    d2 += gap * gap;
  }
  return d2 <= ball.radius * ball.radius;
}

Box hull(std::span<const Point> points) {
  Box b{points.front(), points.front()};
  for (const auto& p : points) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      b.lo[i] = std::min(b.lo[i], p[i]);
      b.hi[i] = std::max(b.hi[i], p[i]);
    }
  }
  return b;
}

bool may_be_nonzero(const KForm& form, std::span<const double> y) {
  for (const auto& ball : form.supports()) {
    if (!ball.contains(y)) return false;
  }
  return true;
}

void check_grade(const Current& current, const KForm& form, int expected) {
  if (form.n() != current.n()) {
    throw DimensionMismatch("form and current live in different dimensions");
  }
  if (form.k() != expected) {
    throw GradeError("form grade does not match the current");
  }
}

void check_domain(const Current& current, const KForm& form) {
  const auto b = current.rep().bounds();
  if (!b) return;
  if (!form.domain().contains(b->lo) || !form.domain().contains(b->hi)) {
    throw SupportError("current support escapes the form's domain");
  }
}

}  // namespace

// ---------------------------------------------------------------- Lebesgue

LebesgueCurrent::LebesgueCurrent(KVectorField tau, Expr density, Box box,
                                 int resolution)
    : tau_(std::move(tau)),
      density_(std::move(density)),
      box_(std::move(box)),
      resolution_(resolution) {
  if (tau_.n() != box_.n()) {
    throw DimensionMismatch("orientation field and box differ in dimension");
  }
  if (resolution_ < 1) throw Error("resolution must be positive");
  for (int i = 0; i < box_.n(); ++i) {
    if (!std::isfinite(box_.lo[i]) || !std::isfinite(box_.hi[i]) ||
        !(box_.hi[i] > box_.lo[i])) {
      throw DomainError("Lebesgue current needs a bounded, nondegenerate box");
    }
  }
}

LebesgueCurrent LebesgueCurrent::with_resolution(int resolution) const {
  return LebesgueCurrent(tau_, density_, box_, resolution);
}

LebesgueCurrent LebesgueCurrent::boundary() const {
  if (k() == 0) throw GradeError("boundary of a 0-current");
  return LebesgueCurrent(-divergence(tau_ * density_), 1.0, box_,
                         resolution_);
}

void LebesgueCurrent::visit(std::size_t chunk, const SupportHint& hint,
                            const SampleSink& sink) const {
  const int n = box_.n();
  std::vector<double> h(n);
  double volume = 1.0;
  for (int i = 0; i < n; ++i) {
    h[i] = (box_.hi[i] - box_.lo[i]) / resolution_;
    volume *= h[i];
  }
  std::vector<int> first(n, 0);
  std::vector<int> last(n, resolution_ - 1);
  if (hint) {
    if (hint->empty()) return;
    for (int i = 0; i < n; ++i) {
      double lo = hint->front().center[i] - hint->front().radius;
      double hi = hint->front().center[i] + hint->front().radius;
      for (const auto& b : *hint) {
        lo = std::min(lo, b.center[i] - b.radius);
        hi = std::max(hi, b.center[i] + b.radius);
      }
      first[i] = std::max(
          0, static_cast<int>(std::floor((lo - box_.lo[i]) / h[i] - 0.5)));
      last[i] = std::min(resolution_ - 1, static_cast<int>(std::ceil(
                                              (hi - box_.lo[i]) / h[i] - 0.5)));
      if (first[i] > last[i]) return;
    }
  }
  const int c = static_cast<int>(chunk);
  if (c < first[0] || c > last[0]) return;

  auto midpoint = [&](int axis, int j) {
    return box_.lo[axis] + (j + 0.5) * h[axis];
  };
  std::vector<int> idx(first);
  idx[0] = c;
  Point x(n);
  for (int i = 0; i < n; ++i) x[i] = midpoint(i, idx[i]);
  while (true) {
    const double rho = density_.evaluate(x);
    const MultiVector tau = tau_.eval(x);
    sink(Sample{x, volume * rho, tau});
    int axis = n - 1;
    while (axis >= 1) {
      if (++idx[axis] <= last[axis]) break;
      idx[axis] = first[axis];
      x[axis] = midpoint(axis, idx[axis]);
      --axis;
    }
    if (axis < 1) break;
    x[axis] = midpoint(axis, idx[axis]);
  }
}

// -------------------------------------------------------------- Simplicial

SimplicialCurrent::SimplicialCurrent(int n, int k,
                                     std::vector<Simplex> simplices, int order)
    : n_(n), k_(k), order_(order), simplices_(std::move(simplices)) {
  if (k_ < 0 || k_ > n_) throw GradeError("simplex grade outside 0..n");
  for (const auto& s : simplices_) {
    if (static_cast<int>(s.vertices.size()) != k_ + 1) {
      throw GradeError("k-simplex needs k+1 vertices");
    }
    MultiVector orient = MultiVector::scalar(n_, 1.0);
    for (const auto& p : s.vertices) {
      if (static_cast<int>(p.size()) != n_) {
        throw DimensionMismatch("simplex vertex has the wrong dimension");
      }
    }
    for (int j = 1; j <= k_; ++j) {
      MultiVector edge(n_, 1);
      for (int i = 0; i < n_; ++i) {
        edge[i] = s.vertices[j][i] - s.vertices[0][i];
      }
      orient = wedge(orient, edge);
    }
    orientations_.push_back(std::move(orient));
  }
}

SimplicialCurrent SimplicialCurrent::segment(Point a, Point b,
                                             double multiplicity) {
  const int n = static_cast<int>(a.size());
  return SimplicialCurrent(n, 1, {Simplex{{std::move(a), std::move(b)},
                                          multiplicity}});
}

MultiVector SimplicialCurrent::orientation(std::size_t i) const {
  return orientations_.at(i);
}

std::optional<Box> SimplicialCurrent::bounds() const {
  if (simplices_.empty()) return std::nullopt;
  std::vector<Point> all;
  for (const auto& s : simplices_) {
    all.insert(all.end(), s.vertices.begin(), s.vertices.end());
  }
  return hull(all);
}

void SimplicialCurrent::visit(std::size_t chunk, const SupportHint& hint,
                              const SampleSink& sink) const {
  const Simplex& s = simplices_[chunk];
  if (hint) {
    const Box b = hull(s.vertices);
    if (std::none_of(hint->begin(), hint->end(),
                     [&](const Ball& ball) { return ball_meets_box(ball, b); })) {
      return;
    }
  }
  const SimplexRule& rule = simplex_rule(k_, order_);
  const MultiVector& orient = orientations_[chunk];
  Point x(n_);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto u = rule.point(q);
    for (int i = 0; i < n_; ++i) {
      double xi = s.vertices[0][i];
      for (int j = 0; j < k_; ++j) {
        xi += u[j] * (s.vertices[j + 1][i] - s.vertices[0][i]);
      }
      x[i] = xi;
    }
    sink(Sample{x, s.multiplicity * rule.weights[q], orient});
  }
}

SimplicialCurrent SimplicialCurrent::boundary() const {
  if (k_ == 0) throw GradeError("boundary of a 0-chain");
  std::map<std::vector<Point>, double> faces;
  for (const auto& s : simplices_) {
    for (int i = 0; i <= k_; ++i) {
      std::vector<Point> face;
      for (int j = 0; j <= k_; ++j) {
        if (j != i) face.push_back(s.vertices[j]);
      }
      // Canonical vertex order; an odd reordering flips the orientation.
      std::vector<int> order(face.size());
      for (std::size_t j = 0; j < order.size(); ++j) order[j] = int(j);
      std::sort(order.begin(), order.end(),
                [&](int a, int b) { return face[a] < face[b]; });
      bool repeated = false;
      std::vector<Point> sorted;
      for (std::size_t j = 0; j < order.size(); ++j) {
        sorted.push_back(face[order[j]]);
        if (j > 0 && sorted[j] == sorted[j - 1]) repeated = true;
      }
      if (repeated) continue;  // degenerate face
      const double sign = (i % 2 == 0 ? 1.0 : -1.0) * perm_sign(order);
      faces[sorted] += sign * s.multiplicity;
    }
  }
  std::vector<Simplex> out;
  for (auto& [vertices, mult] : faces) {
    if (mult != 0.0) out.push_back(Simplex{vertices, mult});
  }
  return SimplicialCurrent(n_, k_ - 1, std::move(out), order_);
}

// ------------------------------------------------------------ Curve family

CurveFamilyCurrent::CurveFamilyCurrent(std::vector<Expr> curve, double a0,
                                       double a1, double t0, double t1,
                                       int outer_panels, int order)
    : curve_(std::move(curve)),
      a0_(a0),
      a1_(a1),
      t0_(t0),
      t1_(t1),
      order_(order) {
  if (curve_.empty()) throw DimensionMismatch("curve needs components");
  if (!(a1_ > a0_) || !(t1_ > t0_)) {
    throw DomainError("curve family needs increasing parameter ranges");
  }
  for (const auto& c : curve_) {
    if (c.max_variable() > 1) {
      throw DimensionMismatch("curve expressions may only use a and t");
    }
    velocity_.push_back(c.derivative(1));
  }
  outer_ = composite_gauss(a0_, a1_, outer_panels, order_);
}

Point CurveFamilyCurrent::point(double a, double t) const {
  const double at[2] = {a, t};
  Point x(curve_.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = curve_[i].evaluate(at);
  return x;
}

std::vector<double> CurveFamilyCurrent::crossings(
    double a, const std::vector<Ball>& balls) const {
  constexpr int kScan = 128;
  std::vector<double> out;
  for (const auto& ball : balls) {
    auto level = [&](double t) {
      const Point x = point(a, t);
      double d2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        d2 += (x[i] - ball.center[i]) * (x[i] - ball.center[i]);
      }
      return d2 - ball.radius * ball.radius;
    };
    double t_prev = t0_;
    double g_prev = level(t_prev);
    for (int s = 1; s <= kScan; ++s) {
      const double t = t0_ + (t1_ - t0_) * s / kScan;
      const double g = level(t);
      if (g == 0.0) {
        out.push_back(t);
      } else if ((g < 0.0) != (g_prev < 0.0) && g_prev != 0.0) {
        double lo = t_prev;
        double hi = t;
        double g_lo = g_prev;
        for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + std::abs(hi));
             ++it) {
          const double mid = 0.5 * (lo + hi);
          const double gm = level(mid);
          if ((gm < 0.0) == (g_lo < 0.0)) {
            lo = mid;
            g_lo = gm;
          } else {
            hi = mid;
          }
        }
        out.push_back(0.5 * (lo + hi));
      }
      t_prev = t;
      g_prev = g;
    }
  }
  return out;
}

void CurveFamilyCurrent::visit(std::size_t chunk, const SupportHint& hint,
                               const SampleSink& sink) const {
  const double a = outer_.nodes[chunk];
  const double wa = outer_.weights[chunk];
  std::vector<double> breaks;
  if (hint) breaks = crossings(a, *hint);
  const QuadratureRule inner = split_gauss(t0_, t1_, breaks, order_);
  const int n = static_cast<int>(curve_.size());
  MultiVector velocity(n, 1);
  for (std::size_t q = 0; q < inner.size(); ++q) {
    const double at[2] = {a, inner.nodes[q]};
    const Point x = point(a, inner.nodes[q]);
    if (hint && !in_any(*hint, x)) continue;
    for (int i = 0; i < n; ++i) velocity[i] = velocity_[i].evaluate(at);
    sink(Sample{x, wa * inner.weights[q], velocity});
  }
}

// ------------------------------------------------------------------ Atomic

AtomicCurrent::AtomicCurrent(int n, int k, std::vector<Atom> atoms)
    : n_(n), k_(k), atoms_(std::move(atoms)) {
  for (const auto& a : atoms_) {
    if (static_cast<int>(a.x.size()) != n_ || a.orientation.n() != n_) {
      throw DimensionMismatch("atom has the wrong dimension");
    }
    if (a.orientation.k() != k_) throw GradeError("atom has the wrong grade");
  }
}

AtomicCurrent AtomicCurrent::dirac(Point x, double weight) {
  const int n = static_cast<int>(x.size());
  return AtomicCurrent(
      n, 0, {Atom{std::move(x), weight, MultiVector::scalar(n, 1.0)}});
}

std::optional<Box> AtomicCurrent::bounds() const {
  if (atoms_.empty()) return std::nullopt;
  std::vector<Point> pts;
  for (const auto& a : atoms_) pts.push_back(a.x);
  return hull(pts);
}

void AtomicCurrent::visit(std::size_t, const SupportHint& hint,
                          const SampleSink& sink) const {
  for (const auto& a : atoms_) {
    if (hint && !in_any(*hint, a.x)) continue;
    sink(Sample{a.x, a.weight, a.orientation});
  }
}

// --------------------------------------------------------------------- Sum

CurrentSum::CurrentSum(std::vector<std::pair<double, Current>> terms)
    : terms_(std::move(terms)) {
  if (terms_.empty()) throw Error("empty current sum");
  offsets_.push_back(0);
  for (const auto& [c, t] : terms_) {
    if (t.n() != n()) throw DimensionMismatch("summands differ in dimension");
    if (t.k() != k()) throw GradeError("summands differ in grade");
    offsets_.push_back(offsets_.back() + t.rep().chunk_count());
  }
}

std::optional<Box> CurrentSum::bounds() const {
  std::vector<Point> corners;
  for (const auto& [c, t] : terms_) {
    const auto b = t.rep().bounds();
    if (!b) return std::nullopt;
    corners.push_back(b->lo);
    corners.push_back(b->hi);
  }
  return hull(corners);
}

void CurrentSum::visit(std::size_t chunk, const SupportHint& hint,
                       const SampleSink& sink) const {
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), chunk);
  const std::size_t term = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  const double c = terms_[term].first;
  terms_[term].second.rep().visit(
      chunk - offsets_[term], hint, [&](const Sample& s) {
        sink(Sample{s.x, c * s.weight, s.orientation});
      });
}

// ---------------------------------------------------------------- Interior

InteriorCurrent::InteriorCurrent(Current base, KForm omega)
    : base_(std::move(base)), omega_(std::move(omega)) {
  if (omega_.n() != base_.n()) {
    throw DimensionMismatch("form and current live in different dimensions");
  }
  if (omega_.k() > base_.k()) {
    throw GradeError("interior product needs h <= k");
  }
}

void InteriorCurrent::visit(std::size_t chunk, const SupportHint& hint,
                            const SampleSink& sink) const {
  base_.rep().visit(chunk, merge_hints(hint, support_hint(omega_)),
                    [&](const Sample& s) {
                      const MultiVector t = trace(s.orientation, omega_.eval(s.x));
                      sink(Sample{s.x, s.weight, t});
                    });
}

Current interior(const Current& current, const KForm& omega) {
  return InteriorCurrent(current, omega);
}

// ------------------------------------------------------------- Reductions

std::vector<double> integrate(const Current& current, const SupportHint& hint,
                              std::size_t outputs, const Integrand& integrand,
                              unsigned threads) {
  const CurrentRep& rep = current.rep();
  const std::size_t chunks = rep.chunk_count();
  std::vector<std::vector<KahanSum>> partial(chunks,
                                             std::vector<KahanSum>(outputs));
  parallel_for(
      chunks,
      [&](std::size_t c) {
        std::vector<double> scratch(outputs);
        auto& acc = partial[c];
        rep.visit(c, hint, [&](const Sample& s) {
          std::fill(scratch.begin(), scratch.end(), 0.0);
          integrand(s, scratch);
          for (std::size_t o = 0; o < outputs; ++o) acc[o].add(scratch[o]);
        });
      },
      threads);
  std::vector<double> out(outputs);
  for (std::size_t o = 0; o < outputs; ++o) {
    KahanSum total;
    for (std::size_t c = 0; c < chunks; ++c) total.add(partial[c][o].value());
    out[o] = total.value();
  }
  return out;
}

std::vector<double> pair(const Current& current, std::span<const KForm> forms,
                         unsigned threads) {
  for (const auto& f : forms) {
    check_grade(current, f, current.k());
    check_domain(current, f);
  }
  return integrate(
      current, support_hint(forms), forms.size(),
      [&](const Sample& s, std::span<double> out) {
        for (std::size_t i = 0; i < forms.size(); ++i) {
          if (!may_be_nonzero(forms[i], s.x)) continue;
          out[i] = s.weight * pair(s.orientation, forms[i].eval(s.x));
        }
      },
      threads);
}

double pair(const Current& current, const KForm& omega, unsigned threads) {
  return pair(current, std::span<const KForm>(&omega, 1), threads).front();
}

double boundary_pair(const Current& current, const KForm& omega,
                     unsigned threads) {
  if (current.k() == 0) throw GradeError("boundary of a 0-current");
  check_grade(current, omega, current.k() - 1);
  if (const auto* leb = current.as<LebesgueCurrent>()) {
    const auto& balls = omega.supports();
    if (std::none_of(balls.begin(), balls.end(), [&](const Ball& b) {
          return b.inside(leb->box());
        })) {
      throw SupportError(
          "boundary pairing of a Lebesgue current needs a form compactly "
          "supported inside its box");
    }
  }
  return pair(current, exterior_derivative(omega), threads);
}

double mass(const Current& current, unsigned threads) {
  return integrate(
             current, std::nullopt, 1,
             [](const Sample& s, std::span<double> out) {
               out[0] = std::abs(s.weight) * s.orientation.norm();
             },
             threads)
      .front();
}

// -------------------------------------------------------------------- Maps

void IdentityMap::evaluate(std::span<const double> x, Point& y,
                           Eigen::MatrixXd& jacobian) const {
  y.assign(x.begin(), x.end());
  jacobian = Eigen::MatrixXd::Identity(x.size(), x.size());
}

void TranslationMap::evaluate(std::span<const double> x, Point& y,
                              Eigen::MatrixXd& jacobian) const {
  if (x.size() != shift_.size()) {
    throw DimensionMismatch("translation and point differ in dimension");
  }
  y.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + shift_[i];
  jacobian = Eigen::MatrixXd::Identity(x.size(), x.size());
}

ExprMap::ExprMap(std::vector<Expr> components)
    : components_(std::move(components)) {
  const int n = static_cast<int>(components_.size());
  for (const auto& c : components_) {
    if (c.max_variable() >= n) {
      throw DimensionMismatch("map component uses an undeclared variable");
    }
    for (int j = 0; j < n; ++j) partials_.push_back(c.derivative(j));
  }
}

void ExprMap::evaluate(std::span<const double> x, Point& y,
                       Eigen::MatrixXd& jacobian) const {
  const std::size_t n = components_.size();
  if (x.size() != n) throw DimensionMismatch("map and point differ");
  y.resize(n);
  jacobian.resize(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = components_[i].evaluate(x);
    for (std::size_t j = 0; j < n; ++j) {
      jacobian(i, j) = partials_[i * n + j].evaluate(x);
    }
  }
}

void FlowMap::evaluate(std::span<const double> x, Point& y,
                       Eigen::MatrixXd& jacobian) const {
  const FlowState s = flow_with_jacobian(spec_, t_, x);
  y.assign(s.x.data(), s.x.data() + s.x.size());
  jacobian = s.jacobian;
}

std::vector<double> pushforward_pair(const Current& current,
                                     const PointMap& map,
                                     std::span<const KForm> forms,
                                     unsigned threads) {
  for (const auto& f : forms) check_grade(current, f, current.k());
  return integrate(
      current, std::nullopt, forms.size(),
      [&](const Sample& s, std::span<double> out) {
        Point y;
        Eigen::MatrixXd jac;
        map.evaluate(s.x, y, jac);
        std::optional<MultiVector> pushed;
        for (std::size_t i = 0; i < forms.size(); ++i) {
          if (!may_be_nonzero(forms[i], y)) continue;
          if (!pushed) pushed = pushforward_kvector(jac, s.orientation);
          out[i] = s.weight * pair(*pushed, forms[i].eval(y));
        }
      },
      threads);
}

double pushforward_pair(const Current& current, const PointMap& map,
                        const KForm& omega, unsigned threads) {
  return pushforward_pair(current, map, std::span<const KForm>(&omega, 1),
                          threads)
      .front();
}

std::vector<double> homotopy_pair(const Current& current, const FlowSpec& flow,
                                  double t0, double t1,
                                  std::span<const KForm> forms,
                                  HomotopyOptions options, unsigned threads) {
  for (const auto& f : forms) check_grade(current, f, current.k() + 1);
  if (flow.field().n() != current.n()) {
    throw DimensionMismatch("flow and current differ in dimension");
  }
  if (t0 == t1) return std::vector<double>(forms.size(), 0.0);
  if (t1 < t0) {
    auto out = homotopy_pair(current, flow, t1, t0, forms, options, threads);
    for (double& v : out) v = -v;
    return out;
  }
  const QuadratureRule time =
      composite_gauss(t0, t1, options.time_panels, options.order);
  const int n = current.n();
  return integrate(
      current, std::nullopt, forms.size(),
      [&](const Sample& s, std::span<double> out) {
        FlowState state{Eigen::Map<const Eigen::VectorXd>(s.x.data(), n),
                        Eigen::MatrixXd::Identity(n, n)};
        if (t0 != 0.0) state = flow_with_jacobian(flow, t0, s.x);
        double t_prev = t0;
        MultiVector velocity(n, 1);
        for (std::size_t q = 0; q < time.size(); ++q) {
          state = advance(flow, std::move(state), time.nodes[q] - t_prev);
          t_prev = time.nodes[q];
          const std::span<const double> y(state.x.data(), n);
          std::optional<MultiVector> pushed;
          for (std::size_t i = 0; i < forms.size(); ++i) {
            if (!may_be_nonzero(forms[i], y)) continue;
            if (!pushed) {
              const Eigen::VectorXd v = flow.velocity(y);
              for (int j = 0; j < n; ++j) velocity[j] = v[j];
              pushed = wedge(velocity,
                             pushforward_kvector(state.jacobian, s.orientation));
            }
            out[i] += s.weight * time.weights[q] *
                      pair(*pushed, forms[i].eval(y));
          }
        }
      },
      threads);
}

double homotopy_pair(const Current& current, const FlowSpec& flow, double t0,
                     double t1, const KForm& omega, HomotopyOptions options,
                     unsigned threads) {
  return homotopy_pair(current, flow, t0, t1, std::span<const KForm>(&omega, 1),
                       options, threads)
      .front();
}

}  // namespace frobkit
