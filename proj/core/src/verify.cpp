#include "frobkit/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "frobkit/error.hpp"

namespace frobkit {

// ------------------------------------------------------------------ Report

bool ResidualReport::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.pass; });
}

Check& ResidualReport::expect_close(std::string name, double lhs, double rhs,
                                    double tolerance) {
  const double r = std::abs(lhs - rhs);
  checks.push_back(Check{std::move(name), lhs, rhs, r, tolerance,
                         r <= tolerance, ""});
  return checks.back();
}

Check& ResidualReport::expect_at_most(std::string name, double value,
                                      double bound) {
  checks.push_back(Check{std::move(name), value, 0.0, std::abs(value), bound,
                         std::abs(value) <= bound, ""});
  return checks.back();
}

Check& ResidualReport::expect_at_least(std::string name, double value,
                                       double bound) {
  checks.push_back(Check{std::move(name), value, bound,
                         std::max(0.0, bound - value), 0.0, value >= bound,
                         "lower bound"});
  return checks.back();
}

Check& ResidualReport::expect_equal(std::string name, double lhs,
                                    double rhs) {
  return expect_close(std::move(name), lhs, rhs, 0.0);
}

Check& ResidualReport::not_applicable(std::string name, std::string why) {
  checks.push_back(
      Check{std::move(name), 0.0, 0.0, 0.0, 0.0, true, std::move(why)});
  return checks.back();
}

void ResidualReport::append(const ResidualReport& other,
                            const std::string& prefix) {
  for (Check c : other.checks) {
    c.name = prefix + c.name;
    checks.push_back(std::move(c));
  }
}

// --------------------------------------------------------------- Ensembles

std::vector<KForm> bump_ensemble(const Box& box, const Box& domain, int grade,
                                 const EnsembleSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = box.n();
  std::vector<KForm> out;
  for (int i = 0; i < spec.count; ++i) {
    const double r =
        (spec.min_radius + (spec.max_radius - spec.min_radius) * unit(rng)) *
        box.min_side();
    Point c(n);
    for (int j = 0; j < n; ++j) {
      c[j] = box.lo[j] + r + (box.hi[j] - box.lo[j] - 2 * r) * unit(rng);
    }
    MultiCovector dir(n, grade);
    if (grade == 0) {
      dir[0] = 1.0;
    } else {
      for (std::size_t p = 0; p < dir.size(); ++p) dir[p] = 2 * unit(rng) - 1;
    }
    out.push_back(bump_form(domain, c, r, dir));
  }
  return out;
}

double ball_integral(const Expr& integrand, const Ball& ball) {
  const int n = static_cast<int>(ball.center.size());
  const double r = ball.radius;
  const auto& g = gauss_legendre(32);
  KahanSum sum;
  Point x(n);
  if (n == 1) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      x[0] = ball.center[0] - r + 2 * r * g.nodes[i];
      sum.add(2 * r * g.weights[i] * integrand.evaluate(x));
    }
    return sum.value();
  }
  constexpr int kAzimuth = 64;
  const double dphi = 2 * std::numbers::pi / kAzimuth;
  if (n == 2) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double rho = r * g.nodes[i];
      for (int a = 0; a < kAzimuth; ++a) {
        const double phi = a * dphi;
        x[0] = ball.center[0] + rho * std::cos(phi);
        x[1] = ball.center[1] + rho * std::sin(phi);
        sum.add(r * g.weights[i] * dphi * rho * integrand.evaluate(x));
      }
    }
    return sum.value();
  }
  if (n == 3) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double rho = r * g.nodes[i];
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double ct = 2 * g.nodes[j] - 1;
        const double st = std::sqrt(std::max(0.0, 1 - ct * ct));
        for (int a = 0; a < kAzimuth; ++a) {
          const double phi = a * dphi;
          x[0] = ball.center[0] + rho * st * std::cos(phi);
          x[1] = ball.center[1] + rho * st * std::sin(phi);
          x[2] = ball.center[2] + rho * ct;
          sum.add(r * g.weights[i] * 2 * g.weights[j] * dphi * rho * rho *
                  integrand.evaluate(x));
        }
      }
    }
    return sum.value();
  }
  throw DimensionMismatch("ball_integral supports n <= 3");
}

// ----------------------------------------------------------------- Checks

KForm alpha_form(const KVectorField& w, const MultiVector& u) {
  if (w.k() != 2) throw GradeError("alpha_form expects a 2-vectorfield w");
  if (u.n() != w.n()) throw DimensionMismatch("u and w differ in dimension");
  return star_vec(wedge(w, KVectorField::constant(u, w.domain())));
}

namespace {

// Sequential pass over every sample of a current.
void for_each_sample(const Current& current, const SampleSink& sink) {
  const auto& rep = current.rep();
  for (std::size_t c = 0; c < rep.chunk_count(); ++c) {
    rep.visit(c, std::nullopt, sink);
  }
}

double volume_pairing(const MultiVector& top) {
  return pair(top, MultiCovector::volume(top.n()));
}

}  // namespace

double tangency_residual(const Scenario& scenario) {
  double worst = 0.0;
  for_each_sample(scenario.current, [&](const Sample& s) {
    for (const auto& vi : scenario.frame.vectors()) {
      if (s.orientation.k() + 1 > s.orientation.n()) return;
      worst = std::max(worst, wedge(s.orientation, vi.eval(s.x)).max_abs());
    }
  });
  return worst;
}

ResidualReport lemma_alpha_check(const Frame& frame, const KVectorField& w,
                                 const MultiVector& u,
                                 const std::vector<Point>& points) {
  const KForm alpha = alpha_form(w, u);
  const KForm dalpha = exterior_derivative(alpha);
  const KVectorField divw = divergence(w);
  double annihilation = 0.0;
  std::vector<double> lhs;
  std::vector<double> rhs;
  for (const auto& x : points) {
    const MultiVector v = frame.value(x);
    annihilation = std::max(annihilation, trace(v, alpha.eval(x)).max_abs());
    lhs.push_back(pair(v, dalpha.eval(x)));
    rhs.push_back(volume_pairing(wedge(wedge(v, divw.eval(x)), u)));
  }
  double max_lhs = 0.0;
  double max_rhs = 0.0;
  double res_plus = 0.0;
  double res_minus = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    max_lhs = std::max(max_lhs, std::abs(lhs[i]));
    max_rhs = std::max(max_rhs, std::abs(rhs[i]));
    res_plus = std::max(res_plus, std::abs(lhs[i] - rhs[i]));
    res_minus = std::max(res_minus, std::abs(lhs[i] + rhs[i]));
  }
  ResidualReport report;
  const double tol = ScenarioTolerances::kExact * std::max(1.0, max_rhs);
  report.expect_at_most("lemma alpha (i): max |v _| alpha|", annihilation,
                        ScenarioTolerances::kExact);
  if (max_lhs <= tol && max_rhs <= tol) {
    report.expect_close("lemma alpha (ii): <v, d alpha> vs <v ^ div w ^ u, dx>",
                        max_lhs, max_rhs, tol)
        .note = "both sides vanish; sign indeterminate";
  } else {
    const int sigma = res_plus <= res_minus ? 1 : -1;
    report.sign_sigma = sigma;
    Check& c = report.expect_close(
        "lemma alpha (ii): <v, d alpha> vs sigma <v ^ div w ^ u, dx>", max_lhs,
        max_rhs, tol);
    c.residual = std::min(res_plus, res_minus);
    c.pass = c.residual <= tol;
    c.note = sigma > 0 ? "sigma = +1" : "sigma = -1";
  }
  return report;
}

WeakIdentityValues weak_key_identity(const Scenario& scenario,
                                     const KVectorField& w,
                                     const MultiVector& u, const KForm& f) {
  const double tangency = tangency_residual(scenario);
  if (tangency > kTangencyTolerance) {
    throw PrecheckFailure("current is not tangent to the distribution");
  }
  const KForm alpha = alpha_form(w, u);
  if (alpha.k() != scenario.current.k() - 1) {
    throw GradeError("alpha must have grade k-1");
  }
  WeakIdentityValues out;
  out.a = boundary_pair(scenario.current, wedge(f, alpha));
  out.b = pair(interior(scenario.current, exterior_derivative(alpha)), f);
  if (scenario.boundary) out.analytic = pair(interior(*scenario.boundary, alpha), f);
  return out;
}

ResidualReport strong_key_identity(const Scenario& scenario,
                                   const std::vector<KVectorField>& ws,
                                   const std::vector<KForm>& fs,
                                   double tolerance) {
  if (!scenario.boundary) {
    throw Error("strong identity needs an analytic boundary");
  }
  const int n = scenario.current.n();
  const int k = scenario.current.k();
  const std::size_t m = binomial(n, k + 1);
  const std::size_t count = fs.size();
  const SupportHint hint = support_hint(fs);
  // Below this both sides are rounding noise and carry no sign.
  constexpr double kSignFloor = 1e-9;

  // Per w: rows of count * m coefficients.
  std::vector<std::vector<double>> left;
  std::vector<std::vector<double>> right;
  for (const auto& w : ws) {
    const KVectorField divw = divergence(w);
    auto side = [&](const Current& cur, auto&& orientation) {
      return integrate(cur, hint, count * m,
                       [&](const Sample& s, std::span<double> out) {
                         std::optional<MultiVector> o;
                         for (std::size_t i = 0; i < count; ++i) {
                           const KForm& f = fs[i];
                           bool inside = true;
                           for (const auto& b : f.supports()) {
                             inside = inside && b.contains(s.x);
                           }
                           if (!inside) continue;
                           if (!o) o = orientation(s);
                           const double fx = f.eval(s.x)[0] * s.weight;
                           for (std::size_t p = 0; p < m; ++p) {
                             out[i * m + p] = fx * (*o)[p];
                           }
                         }
                       });
    };
    left.push_back(side(*scenario.boundary, [&](const Sample& s) {
      return wedge(s.orientation, w.eval(s.x));
    }));
    right.push_back(side(scenario.current, [&](const Sample& s) {
      return wedge(s.orientation, divw.eval(s.x));
    }));
  }

  auto residual = [&](std::size_t j, std::size_t i, int sigma) {
    double r = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
      r = std::max(r, std::abs(left[j][i * m + p] - sigma * right[j][i * m + p]));
    }
    return r;
  };
  auto magnitude = [&](const std::vector<double>& v, std::size_t i) {
    double r = 0.0;
    for (std::size_t p = 0; p < m; ++p) r = std::max(r, std::abs(v[i * m + p]));
    return r;
  };

  double worst_plus = 0.0;
  double worst_minus = 0.0;
  double largest = 0.0;
  std::vector<int> member_signs;
  for (std::size_t j = 0; j < ws.size(); ++j) {
    for (std::size_t i = 0; i < count; ++i) {
      const double rp = residual(j, i, 1);
      const double rm = residual(j, i, -1);
      worst_plus = std::max(worst_plus, rp);
      worst_minus = std::max(worst_minus, rm);
      const double size =
          std::max(magnitude(left[j], i), magnitude(right[j], i));
      largest = std::max(largest, size);
      if (size > kSignFloor) member_signs.push_back(rp <= rm ? 1 : -1);
    }
  }

  ResidualReport report;
  int sigma = 1;
  if (largest > kSignFloor) {
    sigma = worst_plus <= worst_minus ? 1 : -1;
    report.sign_sigma = sigma;
  }
  for (std::size_t j = 0; j < ws.size(); ++j) {
    double worst = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      worst = std::max(worst, residual(j, i, sigma));
      lhs = std::max(lhs, magnitude(left[j], i));
      rhs = std::max(rhs, magnitude(right[j], i));
    }
    Check& c = report.expect_close(
        "strong identity w[" + std::to_string(j) +
            "]: max |int f (tau' ^ w) dmu' - sigma int f (v ^ div w) dmu|",
        lhs, rhs, tolerance);
    c.residual = worst;
    c.pass = worst <= tolerance;
    c.note = report.sign_sigma ? (sigma > 0 ? "sigma = +1" : "sigma = -1")
                               : "both sides vanish; sigma indeterminate";
  }
  const bool consistent =
      std::all_of(member_signs.begin(), member_signs.end(),
                  [&](int s) { return s == sigma; });
  Check& c = report.expect_equal("strong identity sign consistency",
                                 static_cast<double>(member_signs.size()),
                                 static_cast<double>(std::count(
                                     member_signs.begin(), member_signs.end(),
                                     sigma)));
  c.pass = consistent;
  c.note = "members with a determinable sign vs members agreeing with sigma";
  return report;
}

GpbResult gpb_check(const Scenario& scenario) {
  GpbResult out;
  if (!scenario.boundary) return out;
  if (scenario.boundary->k() == 0) return out;
  out.applicable = true;
  out.min_containment = 1.0;
  out.min_sum_dimension = scenario.current.n();
  for_each_sample(*scenario.boundary, [&](const Sample& s) {
    if (s.weight == 0.0 || s.orientation.max_abs() == 0.0) return;
    const Subspace tangent = span_of(s.orientation);
    const Subspace plane = scenario.frame.plane(s.x);
    const double c = tangent.containment_residual(plane);
    const int d = sum(tangent, plane).dim();
    const int dhat = classify(scenario.frame, s.x);
    ++out.samples;
    out.max_containment = std::max(out.max_containment, c);
    out.min_containment = std::min(out.min_containment, c);
    out.min_sum_dimension = std::min(out.min_sum_dimension, d);
    out.max_sum_dimension = std::max(out.max_sum_dimension, d);
    if (d == dhat) ++out.dimension_matches;
  });
  if (out.samples == 0) out.min_containment = 0.0;
  return out;
}

MagicResult magic_check(const Scenario& scenario, const FlowSpec& flow,
                        double t0, double t1, const std::vector<KForm>& forms,
                        const std::vector<KForm>& sweep_forms,
                        HomotopyOptions options) {
  if (!scenario.boundary) throw Error("magic check needs an analytic boundary");
  double tangency = 0.0;
  for_each_sample(scenario.current, [&](const Sample& s) {
    MultiVector v(s.orientation.n(), 1);
    const Eigen::VectorXd vel = flow.velocity(s.x);
    for (int i = 0; i < v.n(); ++i) v[i] = vel[i];
    if (s.orientation.k() + 1 > s.orientation.n()) return;
    tangency = std::max(tangency, wedge(v, s.orientation).max_abs());
  });
  if (tangency > kTangencyTolerance) {
    throw PrecheckFailure("flow field is not tangent to the current");
  }
  MagicResult out;
  out.lhs = homotopy_pair(*scenario.boundary, flow, t0, t1, forms, options);
  const auto end = pushforward_pair(scenario.current, FlowMap(flow, t1), forms);
  const auto start =
      pushforward_pair(scenario.current, FlowMap(flow, t0), forms);
  out.rhs.resize(forms.size());
  for (std::size_t i = 0; i < forms.size(); ++i) out.rhs[i] = end[i] - start[i];
  out.sweep =
      homotopy_pair(scenario.current, flow, t0, t1, sweep_forms, options);
  return out;
}

// ---------------------------------------------------------- Named scenarios

namespace {

const Expr kX1 = Expr::variable(0);
const Expr kX2 = Expr::variable(1);
const Expr kX3 = Expr::variable(2);

KVectorField vector_field(const Box& box, std::vector<Expr> comps) {
  return KVectorField(1, std::move(comps), box);
}

Frame contact_frame(const Box& box) {
  return Frame({vector_field(box, {1.0, 0.0, 0.0}),
                vector_field(box, {0.0, 1.0, kX1})});
}

Frame constant_frame(const Box& box) {
  return Frame({vector_field(box, {1.0, 0.0, 0.0}),
                vector_field(box, {0.0, 1.0, 0.0})});
}

std::vector<Point> grid_points(const GridSpec& grid) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < grid.size(); ++i) out.push_back(grid.point(i));
  return out;
}

StratificationSummary summarize(const StratificationReport& r) {
  return StratificationSummary{r.grid, r.counts_by_d, r.invalid,
                               r.points.size()};
}

// Affine-plus-quadratic scalar with small random coefficients.
Expr random_scalar(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Expr p = 1.0 + 0.25 * u(rng);
  for (int i = 0; i < n; ++i) {
    p = p + 0.5 * u(rng) * Expr::variable(i);
  }
  p = p + 0.5 * u(rng) * Expr::variable(0) * Expr::variable(n - 1);
  return p;
}

std::string index_name(const char* what, std::size_t i) {
  return std::string(what) + "[" + std::to_string(i) + "]";
}

}  // namespace

Scenario zworski_scenario(int resolution) {
  const Box box = Box::cube(3, 0, 1);
  Frame frame = contact_frame(box);
  LebesgueCurrent t(frame.wedge(), 1.0, box, resolution);
  Current boundary = t.boundary();
  return Scenario{"zworski", std::move(frame), std::move(t),
                  std::move(boundary), box};
}

Scenario involutive_smoke_scenario() {
  const Box box = Box::cube(3, 0, 1);
  const Point p00 = {0.2, 0.2, 0.5};
  const Point p10 = {0.8, 0.2, 0.5};
  const Point p11 = {0.8, 0.8, 0.5};
  const Point p01 = {0.2, 0.8, 0.5};
  SimplicialCurrent square(3, 2,
                           {Simplex{{p00, p10, p11}}, Simplex{{p00, p11, p01}}});
  Current boundary = square.boundary();
  return Scenario{"involutive-smoke", constant_frame(box), std::move(square),
                  std::move(boundary), box};
}

Expr weierstrass_graph() {
  const Expr a = Expr::variable(0);
  Expr g = 0.5;
  for (int j = 0; j < 8; ++j) {
    g = g + 0.1 * std::pow(0.5, j) *
                cos(std::pow(3.0, j) * std::numbers::pi * a);
  }
  return g;
}

CurveFamilyCurrent parabola_family() {
  const Expr a = Expr::variable(0);
  const Expr t = Expr::variable(1);
  return CurveFamilyCurrent({t, a * t * t}, 0, 1, 0, 1, 64);
}

CurveFamilyCurrent segment_family() {
  const Expr t = Expr::variable(1);
  return CurveFamilyCurrent({Expr::variable(0), weierstrass_graph() + t}, 0, 1,
                            0, 1, 256);
}

ConvergenceStudy weak_identity_study(int base_resolution, int levels,
                                     int draws, std::uint64_t seed,
                                     unsigned threads) {
  ConvergenceStudy study;
  study.name = "weak identity: |A - A_exact| under refinement";
  const Scenario base = zworski_scenario(base_resolution);
  const auto* leb = base.current.as<LebesgueCurrent>();
  const KVectorField& v = base.frame.wedge();
  const MultiVector u = MultiVector::scalar(3, 1.0);
  EnsembleSpec spec;
  spec.count = draws;
  spec.seed = seed;
  const auto fs = bump_ensemble(base.form_box, base.form_box, 0, spec);
  std::mt19937_64 rng(seed + 1);

  std::vector<KForm> integrands;  // f α
  std::vector<double> exact;
  for (int d = 0; d < draws; ++d) {
    const Expr p = d == 0 ? Expr(1.0) : random_scalar(rng, 3);
    const KVectorField w = v * p;
    const KForm alpha = alpha_form(w, u);
    integrands.push_back(wedge(fs[d], alpha));
    const Expr density =
        pair(v, exterior_derivative(alpha)).component(0) * fs[d].component(0);
    exact.push_back(ball_integral(density, fs[d].supports().front()));
  }
  study.draw_errors.assign(draws, {});
  for (int level = 0; level < levels; ++level) {
    const int res = base_resolution << level;
    study.resolutions.push_back(res);
    const Current t = leb->with_resolution(res);
    KahanSum pooled;
    for (int d = 0; d < draws; ++d) {
      const double a = boundary_pair(t, integrands[d], threads);
      const double e = std::abs(a - exact[d]);
      study.draw_errors[d].push_back(e);
      pooled.add(e);
    }
    study.errors.push_back(pooled.value() / draws);
  }
  study.pass = levels >= 2;
  for (std::size_t i = 0; i + 1 < study.errors.size(); ++i) {
    const double order = std::log2(study.errors[i] / study.errors[i + 1]);
    study.orders.push_back(order);
    if (!(std::abs(order - study.expected_order) <= study.order_tolerance)) {
      study.pass = false;
    }
  }
  return study;
}

ResidualReport run_zworski(const ScenarioOptions& options) {
  ResidualReport report;
  report.scenario = "zworski";
  const Scenario s = zworski_scenario(options.resolution);
  const KVectorField& v = s.frame.wedge();
  const MultiVector u = MultiVector::scalar(3, 1.0);

  report.expect_at_most("tangency precheck: max |tau ^ v_i|",
                        tangency_residual(s), 0.0);

  // Divergence and stratification of the contact distribution.
  const GridSpec grid{s.form_box, options.grid};
  const auto strat = stratify(s.frame, grid, kDefaultRankTolerance,
                              options.threads);
  report.stratification = summarize(strat);
  double div_dev = 0.0;
  double weak_dev = 0.0;
  const MultiVector e3 = MultiVector::basis(3, {3});
  for (const auto& p : strat.points) {
    div_dev = std::max(div_dev, (s.frame.divergence().eval(p.x) - e3).max_abs());
    weak_dev = std::max(weak_dev, std::abs(p.weak_residual.value_or(0.0) - 1.0));
  }
  report.expect_equal("div v = e3 at every grid point (max deviation)", div_dev,
                      0.0);
  report.expect_at_most("|v ^ div v| = 1 at every grid point (max deviation)",
                        weak_dev, ScenarioTolerances::kExact);
  report.expect_equal("grid points labelled d = 3",
                      static_cast<double>(strat.counts_by_d.count(3)
                                              ? strat.counts_by_d.at(3)
                                              : 0),
                      static_cast<double>(grid.size()));
  report.expect_equal("N(V) covers the grid",
                      static_cast<double>(strat.non_involutive()),
                      static_cast<double>(grid.size()));

  // Lemma checks with w = v, u = 1.
  const auto lemma = lemma_alpha_check(s.frame, v, u, grid_points(grid));
  report.append(lemma);
  double max_pairing = 0.0;
  double min_pairing = 1e300;
  {
    const KForm dalpha = exterior_derivative(alpha_form(v, u));
    for (const auto& p : strat.points) {
      const double val = std::abs(pair(s.frame.value(p.x), dalpha.eval(p.x)));
      max_pairing = std::max(max_pairing, val);
      min_pairing = std::min(min_pairing, val);
    }
  }
  report.expect_close("|<v, d alpha>| = 1 (max)", max_pairing, 1.0,
                      ScenarioTolerances::kExact);
  report.expect_close("|<v, d alpha>| = 1 (min)", min_pairing, 1.0,
                      ScenarioTolerances::kExact);

  // Weak identity over the default ensemble.
  {
    const auto fs = bump_ensemble(s.form_box, s.form_box, 0, options.ensemble);
    std::mt19937_64 rng(options.ensemble.seed + 1);
    for (std::size_t d = 0; d < fs.size(); ++d) {
      const Expr p = d == 0 ? Expr(1.0) : random_scalar(rng, 3);
      const KVectorField w = v * p;
      const auto vals = weak_key_identity(s, w, u, fs[d]);
      const KForm alpha = alpha_form(w, u);
      const Expr density =
          pair(v, exterior_derivative(alpha)).component(0) * fs[d].component(0);
      const double exact = ball_integral(density, fs[d].supports().front());
      const std::string tag = index_name("weak identity draw", d);
      report.expect_close(tag + ": A vs B", vals.a, vals.b,
                          ScenarioTolerances::kWeak);
      report.expect_close(tag + ": A vs exact", vals.a, exact,
                          ScenarioTolerances::kWeak);
      if (vals.analytic) {
        report.expect_close(tag + ": analytic boundary side vs B",
                            *vals.analytic, vals.b, ScenarioTolerances::kWeak);
      }
      if (d == 0) {
        const double integral =
            bump_integral(3, fs[d].supports().front().radius);
        report.expect_close(tag + " (w = v): A vs -int f", vals.a, -integral,
                            ScenarioTolerances::kWeak);
        report.expect_close(tag + " (w = v): B vs -int f", vals.b, -integral,
                            ScenarioTolerances::kWeak);
      }
    }
  }

  // Strong identity with a single global sign.
  {
    const Scenario fine = zworski_scenario(options.strong_resolution);
    std::mt19937_64 rng(options.ensemble.seed + 2);
    std::vector<KVectorField> ws = {v, v * kX2, v * (1.0 + kX1 * kX3),
                                    v * random_scalar(rng, 3)};
    EnsembleSpec spec = options.ensemble;
    spec.seed = options.ensemble.seed + 3;
    const auto fs = bump_ensemble(fine.form_box, fine.form_box, 0, spec);
    const auto strong =
        strong_key_identity(fine, ws, fs, ScenarioTolerances::kStrong);
    report.append(strong);
    report.sign_sigma = strong.sign_sigma;
  }

  // Geometric property of the boundary fails everywhere.
  {
    const auto gpb = gpb_check(zworski_scenario(options.gpb_resolution));
    report.expect_at_least("gpb containment residual of span(tau') in V (max)",
                           gpb.max_containment,
                           ScenarioTolerances::kGpbSeparation);
    report.expect_equal("dim(span(tau') + V) = dim Vhat at every sample",
                        static_cast<double>(gpb.dimension_matches),
                        static_cast<double>(gpb.samples));
    report.expect_equal("dim(span(tau') + V) = 3 (min)", gpb.min_sum_dimension,
                        3.0);
    report.expect_equal("dim(span(tau') + V) = 3 (max)", gpb.max_sum_dimension,
                        3.0);
  }

  // Homotopy identity for the tangent flow of e1.
  {
    const double t1 = 0.1;
    const Scenario m = zworski_scenario(options.magic_resolution);
    const Box wide = Box::cube(3, -1, 2);
    const Box safe = Box::cube(3, t1, 1 - t1);
    // The field is constant, so the integrator is exact at any step.
    const FlowSpec flow(vector_field(wide, {1.0, 0.0, 0.0}), 1e-2);
    EnsembleSpec spec = options.ensemble;
    spec.seed = options.ensemble.seed + 4;
    const auto forms = bump_ensemble(safe, wide, 2, spec);
    spec.seed = options.ensemble.seed + 5;
    const auto sweep_forms = bump_ensemble(safe, wide, 3, spec);
    const auto magic = magic_check(m, flow, 0.0, t1, forms, sweep_forms);
    for (std::size_t i = 0; i < forms.size(); ++i) {
      report.expect_close(index_name("homotopy identity form", i),
                          magic.lhs[i], magic.rhs[i],
                          ScenarioTolerances::kMagic);
    }
    for (std::size_t i = 0; i < sweep_forms.size(); ++i) {
      report.expect_at_most(index_name("swept current vanishes form", i),
                            magic.sweep[i], ScenarioTolerances::kMagic);
    }
    const auto empty = magic_check(m, flow, 0.05, 0.05, {forms.front()},
                                   {sweep_forms.front()});
    report.expect_close("homotopy identity with t0 = t1", empty.lhs[0],
                        empty.rhs[0], 0.0);
  }

  if (options.refine >= 2) {
    auto study = weak_identity_study(options.resolution, options.refine,
                                     options.weak_draws, options.ensemble.seed,
                                     options.threads);
    for (std::size_t i = 0; i < study.orders.size(); ++i) {
      report.expect_close("weak identity observed order " +
                              std::to_string(study.resolutions[i]) + "^3 -> " +
                              std::to_string(study.resolutions[i + 1]) + "^3",
                          study.orders[i], study.expected_order,
                          study.order_tolerance);
    }
    report.convergence.push_back(std::move(study));
  }
  return report;
}

namespace {

// Σ_q w_q g(a_q) over the family's outer nodes.
double outer_sum(const CurveFamilyCurrent& family,
                 const std::function<double(double)>& g) {
  KahanSum s;
  const auto& rule = family.outer_rule();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    s.add(rule.weights[q] * g(rule.nodes[q]));
  }
  return s.value();
}

double scalar_at(const KForm& f, const Point& x) { return f.eval(x)[0]; }

}  // namespace

ResidualReport run_parabola(const ScenarioOptions& options) {
  ResidualReport report;
  report.scenario = "parabola";
  const CurveFamilyCurrent family = parabola_family();
  const Box domain = Box::cube(2, -1, 2);
  const Box box = Box::cube(2, -0.2, 1.2);

  auto target = [&](const KForm& f) {
    return outer_sum(family,
                     [&](double s) { return scalar_at(f, {1.0, s}); }) -
           scalar_at(f, {0.0, 0.0});
  };
  std::vector<KForm> fs = bump_ensemble(box, domain, 0, options.ensemble);
  fs.push_back(bump_form(domain, {1.0, 0.5}, 0.3, MultiCovector::scalar(2, 1.0)));
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const std::string name = i + 1 == fs.size()
                                 ? std::string("boundary pairing, bump at (1, 0.5) r = 0.3")
                                 : index_name("boundary pairing bump", i);
    report.expect_close(name, boundary_pair(family, fs[i], options.threads),
                        target(fs[i]), ScenarioTolerances::kFamily);
  }
  report.expect_close("boundary pairing with f = x2",
                      boundary_pair(family, KForm::scalar(kX2, domain)), 0.5,
                      ScenarioTolerances::kExact);
  report.not_applicable("gpb containment",
                        "boundary has grade 0; span(tau') is trivially inside V");
  return report;
}

ResidualReport run_segment_family(const ScenarioOptions& options) {
  ResidualReport report;
  report.scenario = "segment-family";
  const CurveFamilyCurrent family = segment_family();
  const Expr g = weierstrass_graph();
  const Box domain{{-1, -1}, {2, 3}};
  const Box box{{-0.2, 0.0}, {1.2, 2.0}};

  auto target = [&](const KForm& f) {
    return outer_sum(family, [&](double a) {
      const double at[1] = {a};
      const double ga = g.evaluate(at);
      return scalar_at(f, {a, ga + 1.0}) - scalar_at(f, {a, ga});
    });
  };
  const auto fs = bump_ensemble(box, domain, 0, options.ensemble);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    report.expect_close(index_name("boundary pairing bump", i),
                        boundary_pair(family, fs[i], options.threads),
                        target(fs[i]), ScenarioTolerances::kFamily);
  }
  const KForm away =
      bump_form(domain, {0.5, 1.0}, 0.15, MultiCovector::scalar(2, 1.0));
  report.expect_at_most("bump away from both graphs",
                        boundary_pair(family, away, options.threads),
                        ScenarioTolerances::kExact);
  report.not_applicable("gpb containment",
                        "boundary has grade 0; span(tau') is trivially inside V");
  return report;
}

ResidualReport run_involutive_smoke(const ScenarioOptions& options) {
  ResidualReport report;
  report.scenario = "involutive-smoke";
  const Scenario s = involutive_smoke_scenario();
  const KVectorField& v = s.frame.wedge();
  const MultiVector u = MultiVector::scalar(3, 1.0);

  report.expect_at_most("tangency precheck: max |tau ^ v_i|",
                        tangency_residual(s), 0.0);

  const GridSpec grid{s.form_box, options.grid};
  const auto strat =
      stratify(s.frame, grid, kDefaultRankTolerance, options.threads);
  report.stratification = summarize(strat);
  double worst = 0.0;
  for (const auto& p : strat.points) worst = std::max(worst, p.residual);
  report.expect_equal("N(V) is empty", static_cast<double>(strat.non_involutive()),
                      0.0);
  report.expect_at_most("involutivity residual (max over grid)", worst,
                        ScenarioTolerances::kSmoke);

  report.append(lemma_alpha_check(s.frame, v, u, grid_points(grid)));

  const auto gpb = gpb_check(s);
  report.expect_at_most("gpb containment residual of span(tau') in V (max)",
                        gpb.max_containment, ScenarioTolerances::kExact);
  report.expect_equal("dim(span(tau') + V) = dim Vhat at every sample",
                      static_cast<double>(gpb.dimension_matches),
                      static_cast<double>(gpb.samples));

  const auto fs = bump_ensemble(s.form_box, s.form_box, 0, options.ensemble);
  const Current slab = LebesgueCurrent(v, 1.0, s.form_box, options.resolution);
  const Scenario lebesgue{"involutive-lebesgue", s.frame, slab, std::nullopt,
                          s.form_box};
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto simp = weak_key_identity(s, v, u, fs[i]);
    const std::string tag = index_name("weak identity bump", i);
    report.expect_at_most(tag + ": simplicial A", simp.a,
                          ScenarioTolerances::kSmoke);
    report.expect_at_most(tag + ": simplicial B", simp.b,
                          ScenarioTolerances::kSmoke);
    const auto leb = weak_key_identity(lebesgue, v, u, fs[i]);
    report.expect_at_most(tag + ": Lebesgue A", leb.a,
                          ScenarioTolerances::kSmoke);
    report.expect_at_most(tag + ": Lebesgue B", leb.b,
                          ScenarioTolerances::kSmoke);
  }

  const auto strong = strong_key_identity(s, {v, v * kX1}, fs,
                                          ScenarioTolerances::kSmoke);
  report.append(strong);
  report.sign_sigma = strong.sign_sigma;
  return report;
}

const std::vector<std::string>& named_scenarios() {
  static const std::vector<std::string> names = {
      "zworski", "parabola", "segment-family", "involutive-smoke"};
  return names;
}

ResidualReport run_scenario(const std::string& name,
                            const ScenarioOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  ResidualReport report;
  if (name == "zworski") {
    report = run_zworski(options);
  } else if (name == "parabola") {
    report = run_parabola(options);
  } else if (name == "segment-family") {
    report = run_segment_family(options);
  } else if (name == "involutive-smoke") {
    report = run_involutive_smoke(options);
  } else {
    throw Error("unknown scenario: " + name);
  }
  if (options.refine >= 2 && name != "zworski") {
    report.not_applicable("refinement study",
                          "quadrature here is exact up to rounding");
  }
  report.timing_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return report;
}

std::vector<ResidualReport> run_named_scenarios(const ScenarioOptions& options) {
  std::vector<ResidualReport> out;
  for (const auto& name : named_scenarios()) {
    out.push_back(run_scenario(name, options));
  }
  return out;
}

}  // namespace frobkit
