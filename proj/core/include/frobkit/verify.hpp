#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "frobkit/currents.hpp"
#include "frobkit/distribution.hpp"

namespace frobkit {

/// One compared quantity. `pass` is decided by the producer: most checks
/// are |lhs - rhs| <= tolerance, lower bounds set residual to the shortfall.
struct Check {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

/// Observed convergence of an error sequence under grid refinement.
struct ConvergenceStudy {
  std::string name;
  std::vector<int> resolutions;
  std::vector<double> errors;  // pooled over draws
  std::vector<double> orders;  // log2(e_i / e_{i+1})
  std::vector<std::vector<double>> draw_errors;
  double expected_order = 2.0;
  double order_tolerance = 0.3;
  bool pass = false;
};

struct StratificationSummary {
  GridSpec grid;
  std::map<int, std::size_t> counts_by_d;
  std::size_t invalid = 0;
  std::size_t total = 0;
};

struct ResidualReport {
  std::string scenario;
  std::vector<Check> checks;
  /// Global sign of the strong identity; empty when indeterminate or not
  /// applicable.
  std::optional<int> sign_sigma;
  std::optional<StratificationSummary> stratification;
  std::vector<ConvergenceStudy> convergence;
  double timing_ms = 0.0;

  bool pass() const;

  Check& expect_close(std::string name, double lhs, double rhs,
                      double tolerance);
  Check& expect_at_most(std::string name, double value, double bound);
  Check& expect_at_least(std::string name, double value, double bound);
  Check& expect_equal(std::string name, double lhs, double rhs);
  Check& not_applicable(std::string name, std::string why);
  void append(const ResidualReport& other, const std::string& prefix = "");
};

/// Seeded ensemble of bump test forms.
struct EnsembleSpec {
  int count = 20;
  double min_radius = 0.1;  // fraction of the box's shortest side
  double max_radius = 0.3;
  std::uint64_t seed = 42;
};

/// Bumps amplitude · (1 - |x-c|²/r²)³ · direction with balls inside `box`,
/// uniformly random centers and radii, and directions with coefficients
/// uniform in [-1, 1] (grade 0: direction 1). Forms are defined on
/// `domain`, which must contain `box`.
std::vector<KForm> bump_ensemble(const Box& box, const Box& domain, int grade,
                                 const EnsembleSpec& spec);

/// Integral of a scalar expression over a ball, exact for polynomials of
/// degree <= 31 (Gauss-Legendre in the radius and polar angle, uniform in
/// the azimuth). Implemented for n = 1, 2, 3.
double ball_integral(const Expr& integrand, const Ball& ball);

/// A frame, a current T = vμ tangent to it, and optionally its analytic
/// boundary ∂T = τ′μ′ (valid against forms compactly supported in the
/// interior of `form_box`).
struct Scenario {
  std::string name;
  Frame frame;
  Current current;
  std::optional<Current> boundary;
  Box form_box;
};

/// α = ★(w ∧ u), a (k-1)-form when w has grade 2 and u grade n-k-1.
KForm alpha_form(const KVectorField& w, const MultiVector& u);

/// max |τ(x) ∧ v_i(x)| over the samples of the scenario's current.
double tangency_residual(const Scenario& scenario);

/// Lemma checks at the given points: (i) max |v ⌐ α|; (ii) ⟨v, dα⟩ against
/// σ ⟨v ∧ div w ∧ u, dx⟩ with σ = ±1 chosen to fit, reported in the
/// report's sign field.
ResidualReport lemma_alpha_check(const Frame& frame, const KVectorField& w,
                                 const MultiVector& u,
                                 const std::vector<Point>& points);

/// Both sides of ∫ f ⟨τ′, α⟩ dμ′ = ∫ f ⟨v, dα⟩ dμ.
struct WeakIdentityValues {
  double a = 0.0;  // ⟨T, d(fα)⟩, the definition-level boundary side
  double b = 0.0;  // ⟨T ⌐ dα, f⟩
  std::optional<double> analytic;  // ⟨∂T ⌐ α, f⟩ via the analytic boundary
};

inline constexpr double kTangencyTolerance = 1e-12;

/// Throws PrecheckFailure when the current is not tangent to the frame.
WeakIdentityValues weak_key_identity(const Scenario& scenario,
                                     const KVectorField& w,
                                     const MultiVector& u, const KForm& f);

/// Strong identity (τ′ ∧ w) μ′ = σ (v ∧ div w) μ tested against each bump
/// f, for every w. σ is one global sign minimizing the largest residual.
/// Throws Error without an analytic boundary.
ResidualReport strong_key_identity(const Scenario& scenario,
                                   const std::vector<KVectorField>& ws,
                                   const std::vector<KForm>& fs,
                                   double tolerance);

struct GpbResult {
  bool applicable = false;
  std::size_t samples = 0;
  double max_containment = 0.0;
  double min_containment = 0.0;
  std::size_t dimension_matches = 0;  // dim(span τ′ + V) == dim V̂
  int min_sum_dimension = 0;
  int max_sum_dimension = 0;
};

/// Containment of span(τ′(x)) in V(x) and dim(span(τ′)+V) vs dim V̂ at the
/// quadrature nodes of the analytic boundary.
GpbResult gpb_check(const Scenario& scenario);

struct MagicResult {
  std::vector<double> lhs;    // ⟨Φ#([t0,t1] × ∂T), ω⟩
  std::vector<double> rhs;    // ⟨Φ_{t1#}T - Φ_{t0#}T, ω⟩
  std::vector<double> sweep;  // ⟨Φ#([t0,t1] × T), η⟩
};

/// Homotopy identity for a flow tangent to T. `forms` are k-forms and
/// `sweep_forms` (k+1)-forms; both must avoid the images of the box faces.
MagicResult magic_check(const Scenario& scenario, const FlowSpec& flow,
                        double t0, double t1, const std::vector<KForm>& forms,
                        const std::vector<KForm>& sweep_forms,
                        HomotopyOptions options = {});

// ---------------------------------------------------------------------------
// Named scenarios

struct ScenarioOptions {
  EnsembleSpec ensemble;
  int resolution = 32;         // Lebesgue quadrature for the weak identity
  int strong_resolution = 64;  // strong identity
  int magic_resolution = 32;
  int gpb_resolution = 12;
  int grid = 9;                // stratification grid per axis
  int refine = 0;              // >= 2: weak-identity refinement study
  int weak_draws = 10;
  unsigned threads = 0;
};

/// Tolerances pinned for the named scenarios.
struct ScenarioTolerances {
  static constexpr double kWeak = 1e-2;
  static constexpr double kStrong = 1e-2;
  static constexpr double kMagic = 1e-4;
  static constexpr double kFamily = 1e-8;
  static constexpr double kExact = 1e-12;
  static constexpr double kSmoke = 1e-9;
  static constexpr double kGpbSeparation = 0.9;
};

Scenario zworski_scenario(int resolution = 32);
Scenario involutive_smoke_scenario();

/// g(a) = 0.5 + 0.1 Σ_{j<8} 2^{-j} cos(3^j π a), the rough graph of the
/// segment-family example.
Expr weierstrass_graph();

CurveFamilyCurrent parabola_family();
CurveFamilyCurrent segment_family();

ResidualReport run_zworski(const ScenarioOptions& options = {});
ResidualReport run_parabola(const ScenarioOptions& options = {});
ResidualReport run_segment_family(const ScenarioOptions& options = {});
ResidualReport run_involutive_smoke(const ScenarioOptions& options = {});

const std::vector<std::string>& named_scenarios();
/// Throws Error for an unknown name.
ResidualReport run_scenario(const std::string& name,
                            const ScenarioOptions& options = {});
std::vector<ResidualReport> run_named_scenarios(
    const ScenarioOptions& options = {});

/// Weak-identity refinement study on the Zworski scenario: errors
/// |A_L - A_exact| at resolution * 2^i, i < levels, over `draws` random
/// (w, f) pairs, with A_exact from ball_integral.
ConvergenceStudy weak_identity_study(int base_resolution, int levels,
                                     int draws, std::uint64_t seed,
                                     unsigned threads = 0);

}  // namespace frobkit
