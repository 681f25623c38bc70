#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "frobkit/dsl.hpp"
#include "frobkit/error.hpp"
#include "frobkit/flow.hpp"
#include "frobkit/report.hpp"
#include "frobkit/selftest.hpp"

namespace fk = frobkit;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInputError = 2;
constexpr int kDegenerate = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fk::Error("cannot read " + path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw fk::Error("cannot write " + path);
  out << text;
}

struct AnalyzeArgs {
  std::string fields;
  int grid = 9;
  double tol = fk::kDefaultRankTolerance;
  std::string csv;
  std::string json;
  unsigned threads = 0;
};

int analyze(const AnalyzeArgs& a) {
  fk::FieldDefinition def;
  try {
    def = fk::parse_fields(read_file(a.fields));
  } catch (const fk::ParseError& e) {
    std::cerr << a.fields << ":" << e.what() << "\n";
    return kInputError;
  } catch (const fk::Error& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  }
  if (def.vectors.empty()) {
    std::cerr << a.fields << ": no vectorfields declared\n";
    return kInputError;
  }
  const auto report = fk::stratify(def.frame(), fk::GridSpec{def.domain, a.grid},
                                   a.tol, a.threads);
  write_output(a.csv, fk::stratification_csv(report));
  const std::string summary = fk::stratification_json(report);
  if (a.json.empty()) {
    std::cerr << summary;
  } else {
    write_output(a.json, summary);
  }
  if (report.invalid == report.points.size()) {
    std::cerr << "frame is degenerate at every grid point\n";
    return kDegenerate;
  }
  return kOk;
}

struct VerifyArgs {
  std::string scenario;
  std::string config;
  std::optional<std::uint64_t> seed;
  int refine = 0;
  std::string out;
  unsigned threads = 0;
};

int verify(const VerifyArgs& a) {
  fk::ScenarioConfig config;
  try {
    if (!a.config.empty()) {
      const auto dir = std::filesystem::path(a.config).parent_path().string();
      config = fk::parse_config(read_file(a.config), dir.empty() ? "." : dir);
    } else {
      config.scenario = a.scenario;
    }
  } catch (const fk::Error& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  }
  if (a.seed) config.options.ensemble.seed = *a.seed;
  if (a.refine) config.options.refine = a.refine;
  config.options.threads = a.threads;
  const auto& names = fk::named_scenarios();
  if (config.scenario != "custom" &&
      std::find(names.begin(), names.end(), config.scenario) == names.end()) {
    std::cerr << "unknown scenario '" << config.scenario << "'; known:";
    for (const auto& n : names) std::cerr << " " << n;
    std::cerr << "\n";
    return kInputError;
  }
  const auto report = fk::run_config(config);
  write_output(a.out, fk::report_json(report));
  for (const auto& c : report.checks) {
    if (!c.pass) std::cerr << "FAIL " << c.name << "\n";
  }
  return report.pass() ? kOk : kFailed;
}

int selftest(std::uint64_t seed) {
  const auto results = fk::run_selftest(seed);
  bool ok = true;
  for (const auto& r : results) {
    std::printf("%s %s (draws %d, worst %.3g, tol %.3g)\n",
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.draws, r.worst,
                r.tolerance);
    ok = ok && r.pass;
  }
  return ok ? kOk : kFailed;
}

struct FlowArgs {
  std::string field;
  double t = 0.0;
  std::vector<double> x;
  double step = 1e-3;
};

int flow(const FlowArgs& a) {
  fk::FieldDefinition def;
  try {
    def = fk::parse_fields(read_file(a.field));
  } catch (const fk::Error& e) {
    std::cerr << a.field << ":" << e.what() << "\n";
    return kInputError;
  }
  if (def.vectors.empty()) {
    std::cerr << a.field << ": no vectorfield declared\n";
    return kInputError;
  }
  if (static_cast<int>(a.x.size()) != def.n) {
    std::cerr << "--x needs " << def.n << " coordinates\n";
    return kInputError;
  }
  const fk::FlowSpec spec(def.vectors.front(), a.step);
  const fk::Point y = fk::flow(spec, a.t, a.x);
  for (std::size_t i = 0; i < y.size(); ++i) {
    std::cout << (i ? " " : "") << fk::format_double(y[i]);
  }
  std::cout << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frobkit: exterior calculus, involutivity strata and current checks"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze_cmd = app.add_subcommand(
      "analyze", "stratify a frame from a field file (CSV on stdout)");
  analyze_cmd->add_option("--fields", an.fields, "field definition file")
      ->required();
  analyze_cmd->add_option("--grid", an.grid, "grid points per axis")
      ->check(CLI::Range(2, 1000));
  analyze_cmd->add_option("--tol", an.tol, "rank tolerance");
  analyze_cmd->add_option("--csv", an.csv, "CSV output file (default stdout)");
  analyze_cmd->add_option("--json", an.json,
                          "JSON summary file (default stderr)");
  analyze_cmd->add_option("--threads", an.threads, "worker threads (0: auto)");

  VerifyArgs ve;
  auto* verify_cmd = app.add_subcommand(
      "verify", "run a verification scenario (JSON report on stdout)");
  auto* scen = verify_cmd->add_option("--scenario", ve.scenario,
                                      "zworski | parabola | segment-family | "
                                      "involutive-smoke");
  auto* conf = verify_cmd->add_option("--config", ve.config, "JSON config file");
  scen->excludes(conf);
  verify_cmd->add_option("--seed", ve.seed, "ensemble seed (default 42)");
  verify_cmd->add_option("--refine", ve.refine,
                         "refinement levels for the convergence study");
  verify_cmd->add_option("--out", ve.out, "report file (default stdout)");
  verify_cmd->add_option("--threads", ve.threads, "worker threads (0: auto)");

  std::uint64_t self_seed = 42;
  auto* selftest_cmd =
      app.add_subcommand("selftest", "run the algebra and operator properties");
  selftest_cmd->add_option("--seed", self_seed, "ensemble seed");

  FlowArgs fl;
  auto* flow_cmd = app.add_subcommand("flow", "print Phi_t(x) for the field v1");
  flow_cmd->add_option("--field", fl.field, "field definition file")->required();
  flow_cmd->add_option("--t", fl.t, "time")->required();
  flow_cmd->add_option("--x", fl.x, "start point, comma separated")
      ->required()
      ->delimiter(',');
  flow_cmd->add_option("--step", fl.step, "RK4 step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  try {
    if (*analyze_cmd) return analyze(an);
    if (*verify_cmd) {
      if (ve.scenario.empty() && ve.config.empty()) {
        std::cerr << "verify needs --scenario or --config\n";
        return kInputError;
      }
      return verify(ve);
    }
    if (*selftest_cmd) return selftest(self_seed);
    if (*flow_cmd) return flow(fl);
  } catch (const fk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kFailed;
}
