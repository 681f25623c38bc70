#include "frobkit/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "frobkit/error.hpp"
#include "json.hpp"

namespace frobkit {

using Json = nlohmann::ordered_json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, end);
}

namespace {

// nlohmann's own float output is shortest round-trip, not 17 digits.
void write(std::string& out, const Json& j, int indent) {
  const std::string pad(2 * indent, ' ');
  const std::string inner(2 * (indent + 1), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(key).dump() + ": ";
        write(out, value, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) {
        return e.is_structured();
      });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write(out, j[i], indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        write(out, j[i], indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string serialize(const Json& j) {
  std::string out;
  write(out, j, 0);
  return out + "\n";
}

Json grid_json(const GridSpec& grid) {
  return Json{{"lo", grid.box.lo}, {"hi", grid.box.hi},
              {"resolution", grid.resolution}};
}

Json counts_json(const std::map<int, std::size_t>& counts) {
  Json out = Json::object();
  for (const auto& [d, c] : counts) out[std::to_string(d)] = c;
  return out;
}

}  // namespace

std::string report_json(const ResidualReport& report) {
  Json j;
  j["tool_version"] = kToolVersion;
  j["scenario"] = report.scenario;
  j["pass"] = report.pass();
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json cj{{"name", c.name},           {"lhs", c.lhs},
            {"rhs", c.rhs},             {"residual", c.residual},
            {"tolerance", c.tolerance}, {"pass", c.pass}};
    if (!c.note.empty()) cj["note"] = c.note;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  j["sign_sigma"] = report.sign_sigma ? Json(*report.sign_sigma) : Json();
  if (report.stratification) {
    const auto& s = *report.stratification;
    j["stratification"] = Json{{"grid", grid_json(s.grid)},
                               {"counts_by_d", counts_json(s.counts_by_d)},
                               {"invalid", s.invalid},
                               {"total", s.total}};
  }
  if (!report.convergence.empty()) {
    Json studies = Json::array();
    for (const auto& c : report.convergence) {
      studies.push_back(Json{{"name", c.name},
                             {"resolutions", c.resolutions},
                             {"errors", c.errors},
                             {"orders", c.orders},
                             {"draw_errors", c.draw_errors},
                             {"expected_order", c.expected_order},
                             {"order_tolerance", c.order_tolerance},
                             {"pass", c.pass}});
    }
    j["convergence"] = std::move(studies);
  }
  j["timing_ms"] = report.timing_ms;
  return serialize(j);
}

std::string stratification_csv(const StratificationReport& report) {
  std::string out;
  for (int i = 0; i < report.n; ++i) out += "x" + std::to_string(i + 1) + ",";
  out += "d,residual\n";
  for (const auto& p : report.points) {
    for (double xi : p.x) out += format_double(xi) + ",";
    if (p.d) out += std::to_string(*p.d);
    out += "," + format_double(p.residual) + "\n";
  }
  return out;
}

std::string stratification_json(const StratificationReport& report) {
  Json j;
  j["tool_version"] = kToolVersion;
  j["n"] = report.n;
  j["k"] = report.k;
  j["grid"] = grid_json(report.grid);
  j["counts_by_d"] = counts_json(report.counts_by_d);
  j["invalid"] = report.invalid;
  j["route_inconsistent"] = report.route_inconsistent;
  j["non_involutive"] = report.non_involutive();
  j["total"] = report.points.size();
  return serialize(j);
}

ScenarioConfig parse_config(std::string_view json_text,
                            const std::string& base_dir) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw Error(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error("config: top level must be an object");
  ScenarioConfig config;
  auto integer = [&](const std::string& key, const Json& value) {
    if (!value.is_number_integer()) {
      throw Error("config: '" + key + "' must be an integer");
    }
    return value.get<long long>();
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "scenario") {
      if (!value.is_string()) throw Error("config: 'scenario' must be a string");
      config.scenario = value.get<std::string>();
    } else if (key == "fields") {
      if (!value.is_string()) throw Error("config: 'fields' must be a string");
      const auto path = std::filesystem::path(base_dir) / value.get<std::string>();
      std::ifstream in(path);
      if (!in) throw Error("config: cannot read " + path.string());
      std::stringstream text;
      text << in.rdbuf();
      config.fields = parse_fields(text.str());
    } else if (key == "seed") {
      config.options.ensemble.seed =
          static_cast<std::uint64_t>(integer(key, value));
    } else if (key == "forms") {
      config.options.ensemble.count = static_cast<int>(integer(key, value));
    } else if (key == "resolution") {
      config.options.resolution = static_cast<int>(integer(key, value));
    } else if (key == "strong_resolution") {
      config.options.strong_resolution = static_cast<int>(integer(key, value));
    } else if (key == "magic_resolution") {
      config.options.magic_resolution = static_cast<int>(integer(key, value));
    } else if (key == "grid") {
      config.options.grid = static_cast<int>(integer(key, value));
    } else if (key == "refine") {
      config.options.refine = static_cast<int>(integer(key, value));
    } else if (key == "weak_draws") {
      config.options.weak_draws = static_cast<int>(integer(key, value));
    } else {
      throw Error("config: unknown key '" + key + "'");
    }
  }
  if (config.scenario.empty()) throw Error("config: 'scenario' is required");
  if (config.scenario == "custom" && !config.fields) {
    throw Error("config: scenario 'custom' needs 'fields'");
  }
  if (config.options.ensemble.count < 1 || config.options.resolution < 2 ||
      config.options.grid < 2) {
    throw Error("config: forms >= 1, resolution >= 2 and grid >= 2 required");
  }
  return config;
}

ResidualReport run_custom(const FieldDefinition& def,
                          const ScenarioOptions& options) {
  ResidualReport report;
  report.scenario = "custom";
  const Frame frame = def.frame();
  const KVectorField tau = def.tau ? *def.tau : frame.wedge();
  const Expr density = def.density ? *def.density : Expr(1.0);
  const LebesgueCurrent t(tau, density, def.domain, options.resolution);
  const Scenario s{"custom", frame, t, t.boundary(), def.domain};

  const double tangency = tangency_residual(s);
  report.expect_at_most("tangency precheck: max |tau ^ v_i|", tangency,
                        kTangencyTolerance);

  const auto strat = stratify(frame, GridSpec{def.domain, options.grid},
                              kDefaultRankTolerance, options.threads);
  report.stratification = StratificationSummary{
      strat.grid, strat.counts_by_d, strat.invalid, strat.points.size()};
  report.expect_equal("route-inconsistent grid points",
                      static_cast<double>(strat.route_inconsistent), 0.0);

  if (frame.n() != 3 || frame.k() != 2) {
    report.not_applicable("weak identity", "implemented for k = 2 in R^3");
  } else if (tangency > kTangencyTolerance) {
    report.not_applicable("weak identity", "current is not tangent");
  } else {
    const auto fs = bump_ensemble(def.domain, def.domain, 0, options.ensemble);
    const MultiVector u = MultiVector::scalar(3, 1.0);
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const auto vals = weak_key_identity(s, frame.wedge(), u, fs[i]);
      const std::string tag = "weak identity bump[" + std::to_string(i) + "]";
      report.expect_close(tag + ": A vs B", vals.a, vals.b,
                          ScenarioTolerances::kWeak);
      report.expect_close(tag + ": analytic boundary side vs B",
                          vals.analytic.value_or(0.0), vals.b,
                          ScenarioTolerances::kWeak);
    }
  }
  return report;
}

ResidualReport run_config(const ScenarioConfig& config) {
  if (config.scenario != "custom") {
    return run_scenario(config.scenario, config.options);
  }
  const auto start = std::chrono::steady_clock::now();
  ResidualReport report = run_custom(*config.fields, config.options);
  report.timing_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return report;
}

}  // namespace frobkit
