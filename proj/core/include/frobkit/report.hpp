#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "frobkit/dsl.hpp"
#include "frobkit/verify.hpp"

namespace frobkit {

inline constexpr const char* kToolVersion = "0.1.0";

/// 17 significant digits, '.' separator regardless of locale. Non-finite
/// values are written as null in JSON and as nan/inf in CSV.
std::string format_double(double v);

/// {tool_version, scenario, pass, checks: [...], sign_sigma,
///  stratification?, convergence?, timing_ms}; keys in this order.
std::string report_json(const ResidualReport& report);

/// Columns x1..xn, d, residual; one row per grid point in grid order.
/// Degenerate points have an empty d.
std::string stratification_csv(const StratificationReport& report);

/// {tool_version, n, k, grid, counts_by_d, invalid, non_involutive, total}.
std::string stratification_json(const StratificationReport& report);

/// Verification config file (JSON):
///   {"scenario": "zworski" | ... | "custom", "fields": "file.fk",
///    "seed": 42, "forms": 20, "resolution": 32, "strong_resolution": 64,
///    "magic_resolution": 32, "grid": 9, "refine": 0, "weak_draws": 10}
/// Only "scenario" is required; "fields" (relative to the config file's
/// directory) is required for "custom". Unknown keys are rejected.
struct ScenarioConfig {
  std::string scenario;
  std::optional<FieldDefinition> fields;
  ScenarioOptions options;
};

/// Throws Error on malformed JSON or unknown keys, ParseError from the
/// referenced field file.
ScenarioConfig parse_config(std::string_view json_text,
                            const std::string& base_dir = ".");

/// Lebesgue current τ ρ 𝓛ⁿ⌐domain built from a field file (τ defaults to
/// v1∧…∧vk, ρ to 1): tangency, stratification and, for k = 2 in R³, the
/// weak identity over the bump ensemble.
ResidualReport run_custom(const FieldDefinition& def,
                          const ScenarioOptions& options);

ResidualReport run_config(const ScenarioConfig& config);

}  // namespace frobkit
