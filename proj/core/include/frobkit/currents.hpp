#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "frobkit/fields.hpp"
#include "frobkit/flow.hpp"
#include "frobkit/quadrature.hpp"

namespace frobkit {

/// One quadrature node of a current. A current acts on a form ω as
/// Σ weight · ⟨orientation, ω(x)⟩ over its samples.
struct Sample {
  std::span<const double> x;
  double weight;
  const MultiVector& orientation;
};

using SampleSink = std::function<void(const Sample&)>;

/// Union of balls outside which an integrand is known to vanish; nullopt
/// means no information. Representations may use it to skip work or to
/// split quadrature panels, never to change the value of a pairing.
using SupportHint = std::optional<std::vector<Ball>>;

SupportHint support_hint(const KForm& form);
SupportHint support_hint(std::span<const KForm> forms);
SupportHint merge_hints(const SupportHint& a, const SupportHint& b);

/// Discretised representation of a k-current. Samples are produced in
/// chunks; every chunk visits its samples in a fixed order, which is what
/// makes reductions independent of the thread count.
class CurrentRep {
 public:
  virtual ~CurrentRep() = default;

  virtual int n() const = 0;
  virtual int k() const = 0;
  virtual std::size_t chunk_count() const = 0;
  virtual void visit(std::size_t chunk, const SupportHint& hint,
                     const SampleSink& sink) const = 0;
  /// Box containing every sample, when cheaply known.
  virtual std::optional<Box> bounds() const { return std::nullopt; }
};

/// Shared immutable handle to any representation.
class Current {
 public:
  template <class Rep>
    requires std::derived_from<Rep, CurrentRep>
  Current(Rep rep)  // NOLINT: representations convert implicitly.
      : rep_(std::make_shared<const Rep>(std::move(rep))) {}

  int n() const { return rep_->n(); }
  int k() const { return rep_->k(); }
  const CurrentRep& rep() const { return *rep_; }

  template <class Rep>
  const Rep* as() const {
    return dynamic_cast<const Rep*>(rep_.get());
  }

 private:
  std::shared_ptr<const CurrentRep> rep_;
};

/// T = τ ρ 𝓛ⁿ ⌐ box, integrated with the midpoint rule on resolution^n
/// cells. The first axis indexes chunks.
class LebesgueCurrent : public CurrentRep {
 public:
  LebesgueCurrent(KVectorField tau, Expr density, Box box,
                  int resolution = 32);

  int n() const override { return box_.n(); }
  int k() const override { return tau_.k(); }
  std::size_t chunk_count() const override { return resolution_; }
  void visit(std::size_t chunk, const SupportHint& hint,
             const SampleSink& sink) const override;
  std::optional<Box> bounds() const override { return box_; }

  const KVectorField& orientation() const { return tau_; }
  const Expr& density() const { return density_; }
  const Box& box() const { return box_; }
  int resolution() const { return resolution_; }

  LebesgueCurrent with_resolution(int resolution) const;

  /// -div(ρτ) 𝓛ⁿ ⌐ box: the boundary as seen by forms compactly supported
  /// in the interior of the box.
  LebesgueCurrent boundary() const;

 private:
  KVectorField tau_;
  Expr density_;
  Box box_;
  int resolution_;
};

/// Oriented affine simplex; its orientation is (p_1-p_0)∧…∧(p_k-p_0).
struct Simplex {
  std::vector<Point> vertices;
  double multiplicity = 1.0;
};

/// Finite chain of oriented affine k-simplices with real multiplicities,
/// integrated with a collapsed Gauss-Legendre rule per simplex.
class SimplicialCurrent : public CurrentRep {
 public:
  SimplicialCurrent(int n, int k, std::vector<Simplex> simplices,
                    int order = kDefaultGaussPoints);

  static SimplicialCurrent segment(Point a, Point b, double multiplicity = 1.0);

  int n() const override { return n_; }
  int k() const override { return k_; }
  std::size_t chunk_count() const override { return simplices_.size(); }
  void visit(std::size_t chunk, const SupportHint& hint,
             const SampleSink& sink) const override;
  std::optional<Box> bounds() const override;

  const std::vector<Simplex>& simplices() const { return simplices_; }
  MultiVector orientation(std::size_t i) const;

  /// Σ_i (-1)^i [p_0 … p̂_i … p_k] with coinciding faces merged and
  /// cancelled faces dropped. Throws GradeError for k = 0.
  SimplicialCurrent boundary() const;

 private:
  int n_;
  int k_;
  int order_;
  std::vector<Simplex> simplices_;
  std::vector<MultiVector> orientations_;
};

/// ∫_A T_a da where T_a is the curve t ↦ γ(a, t), t ∈ [t0, t1]. The curve
/// expressions use variable 0 for a and variable 1 for t.
///
/// Outer integration uses composite Gauss-Legendre panels over A; the inner
/// integral is split where the curve crosses a hinted support sphere, so
/// piecewise polynomial integrands are integrated exactly.
class CurveFamilyCurrent : public CurrentRep {
 public:
  CurveFamilyCurrent(std::vector<Expr> curve, double a0, double a1, double t0,
                     double t1, int outer_panels = 64,
                     int order = kDefaultGaussPoints);

  int n() const override { return static_cast<int>(curve_.size()); }
  int k() const override { return 1; }
  std::size_t chunk_count() const override { return outer_.size(); }
  void visit(std::size_t chunk, const SupportHint& hint,
             const SampleSink& sink) const override;

  const QuadratureRule& outer_rule() const { return outer_; }
  Point point(double a, double t) const;
  std::pair<double, double> parameter_range() const { return {a0_, a1_}; }
  std::pair<double, double> time_range() const { return {t0_, t1_}; }

 private:
  std::vector<double> crossings(double a, const std::vector<Ball>& balls) const;

  std::vector<Expr> curve_;
  std::vector<Expr> velocity_;
  double a0_, a1_, t0_, t1_;
  int order_;
  QuadratureRule outer_;
};

struct Atom {
  Point x;
  double weight = 1.0;
  MultiVector orientation;
};

/// Finite sum of weighted, oriented point masses.
class AtomicCurrent : public CurrentRep {
 public:
  AtomicCurrent(int n, int k, std::vector<Atom> atoms);

  /// weight · δ_x as a 0-current.
  static AtomicCurrent dirac(Point x, double weight = 1.0);

  int n() const override { return n_; }
  int k() const override { return k_; }
  std::size_t chunk_count() const override { return 1; }
  void visit(std::size_t chunk, const SupportHint& hint,
             const SampleSink& sink) const override;
  std::optional<Box> bounds() const override;

  const std::vector<Atom>& atoms() const { return atoms_; }

 private:
  int n_;
  int k_;
  std::vector<Atom> atoms_;
};

/// Σ c_i T_i over currents of one grade.
class CurrentSum : public CurrentRep {
 public:
  explicit CurrentSum(std::vector<std::pair<double, Current>> terms);

  int n() const override { return terms_.front().second.n(); }
  int k() const override { return terms_.front().second.k(); }
  std::size_t chunk_count() const override { return offsets_.back(); }
  void visit(std::size_t chunk, const SupportHint& hint,
             const SampleSink& sink) const override;
  std::optional<Box> bounds() const override;

  const std::vector<std::pair<double, Current>>& terms() const {
    return terms_;
  }

 private:
  std::vector<std::pair<double, Current>> terms_;
  std::vector<std::size_t> offsets_;
};

/// T ⌐ ω: same samples, orientation τ(x) ⌐ ω(x).
class InteriorCurrent : public CurrentRep {
 public:
  InteriorCurrent(Current base, KForm omega);

  int n() const override { return base_.n(); }
  int k() const override { return base_.k() - omega_.k(); }
  std::size_t chunk_count() const override {
    return base_.rep().chunk_count();
  }
  void visit(std::size_t chunk, const SupportHint& hint,
             const SampleSink& sink) const override;
  std::optional<Box> bounds() const override { return base_.rep().bounds(); }

 private:
  Current base_;
  KForm omega_;
};

/// Accumulates `outputs` integrals Σ_samples integrand(sample) with one
/// compensated sum per chunk, combined in chunk order.
using Integrand = std::function<void(const Sample&, std::span<double>)>;
std::vector<double> integrate(const Current& current, const SupportHint& hint,
                              std::size_t outputs, const Integrand& integrand,
                              unsigned threads = 0);

double pair(const Current& current, const KForm& omega, unsigned threads = 0);
std::vector<double> pair(const Current& current, std::span<const KForm> forms,
                         unsigned threads = 0);

/// ⟨∂T, ω⟩ := ⟨T, dω⟩. For Lebesgue currents ω must be a bump form whose
/// support lies inside the box (SupportError otherwise).
double boundary_pair(const Current& current, const KForm& omega,
                     unsigned threads = 0);

Current interior(const Current& current, const KForm& omega);

/// Σ |weight| |orientation| over the samples.
double mass(const Current& current, unsigned threads = 0);

/// C¹ map of R^n evaluated together with its Jacobian.
class PointMap {
 public:
  virtual ~PointMap() = default;
  virtual void evaluate(std::span<const double> x, Point& y,
                        Eigen::MatrixXd& jacobian) const = 0;
};

class IdentityMap : public PointMap {
 public:
  void evaluate(std::span<const double> x, Point& y,
                Eigen::MatrixXd& jacobian) const override;
};

class TranslationMap : public PointMap {
 public:
  explicit TranslationMap(Point shift) : shift_(std::move(shift)) {}
  void evaluate(std::span<const double> x, Point& y,
                Eigen::MatrixXd& jacobian) const override;

 private:
  Point shift_;
};

/// x ↦ (f_1(x), …, f_n(x)) with symbolic Jacobian.
class ExprMap : public PointMap {
 public:
  explicit ExprMap(std::vector<Expr> components);
  void evaluate(std::span<const double> x, Point& y,
                Eigen::MatrixXd& jacobian) const override;

 private:
  std::vector<Expr> components_;
  std::vector<Expr> partials_;  // row-major
};

/// x ↦ Φ(t, x).
class FlowMap : public PointMap {
 public:
  FlowMap(FlowSpec spec, double t) : spec_(std::move(spec)), t_(t) {}
  void evaluate(std::span<const double> x, Point& y,
                Eigen::MatrixXd& jacobian) const override;

 private:
  FlowSpec spec_;
  double t_;
};

/// ⟨f_# T, ω⟩ = Σ weight ⟨(d f)_# τ(x), ω(f(x))⟩ for each form.
std::vector<double> pushforward_pair(const Current& current,
                                     const PointMap& map,
                                     std::span<const KForm> forms,
                                     unsigned threads = 0);
double pushforward_pair(const Current& current, const PointMap& map,
                        const KForm& omega, unsigned threads = 0);

/// ⟨Φ_#([t0,t1] × T), ω⟩ for (k+1)-forms ω, with [t0,t1] × T oriented by
/// e_0 ∧ τ and d_{(t,x)}Φ(e_0) = v(Φ(t,x)). Time integration uses composite
/// Gauss-Legendre panels; Jacobians come from the variational equation.
struct HomotopyOptions {
  int time_panels = 4;
  int order = kDefaultGaussPoints;
};

std::vector<double> homotopy_pair(const Current& current, const FlowSpec& flow,
                                  double t0, double t1,
                                  std::span<const KForm> forms,
                                  HomotopyOptions options = {},
                                  unsigned threads = 0);
double homotopy_pair(const Current& current, const FlowSpec& flow, double t0,
                     double t1, const KForm& omega,
                     HomotopyOptions options = {}, unsigned threads = 0);

}  // namespace frobkit
