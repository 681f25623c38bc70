#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "frobkit/error.hpp"
#include "frobkit/report.hpp"
#include "json.hpp"

using namespace frobkit;
using nlohmann::json;

namespace {

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "frobkit_test_report";
  std::filesystem::create_directories(dir);
  return dir;
}

void write(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

ResidualReport sample_report() {
  ResidualReport r;
  r.scenario = "sample";
  r.expect_close("close", 0.1, 0.1 + 1e-3, 1e-2);
  r.expect_at_most("bound", 2.0, 1.0);
  r.not_applicable("skipped", "why");
  r.sign_sigma = -1;
  r.timing_ms = 12.5;
  return r;
}

}  // namespace

TEST_CASE("seventeen significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(format_double(1e-7) == "9.9999999999999995e-08");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("report json schema") {
  const ResidualReport r = sample_report();
  const std::string text = report_json(r);
  CHECK(text == report_json(r));
  const json j = json::parse(text);
  CHECK(j["tool_version"] == kToolVersion);
  CHECK(j["scenario"] == "sample");
  CHECK(j["pass"] == false);
  REQUIRE(j["checks"].size() == 3);
  const auto& c = j["checks"][0];
  for (const char* key : {"name", "lhs", "rhs", "residual", "tolerance", "pass"}) {
    CHECK(c.contains(key));
  }
  CHECK(c["pass"] == true);
  CHECK(j["checks"][1]["pass"] == false);
  CHECK(j["checks"][2]["note"] == "why");
  CHECK(j["sign_sigma"] == -1);
  CHECK_FALSE(j.contains("stratification"));
  CHECK(j["timing_ms"] == 12.5);
  CHECK(text.find("\"rhs\": 0.10100000000000001") != std::string::npos);
  // Keys appear in schema order.
  CHECK(text.find("tool_version") < text.find("\"scenario\""));
  CHECK(text.find("\"checks\"") < text.find("sign_sigma"));
  CHECK(text.find("sign_sigma") < text.find("timing_ms"));

  ResidualReport empty;
  empty.scenario = "none";
  const json e = json::parse(report_json(empty));
  CHECK(e["sign_sigma"].is_null());
  CHECK(e["pass"] == true);
}

TEST_CASE("stratification outputs") {
  const Box box = Box::cube(3, -1, 1);
  const Frame frame({KVectorField(1, {1.0, 0.0, 0.0}, box),
                     KVectorField(1, {0.0, 1.0, Expr::variable(0)}, box)});
  const auto report = stratify(frame, GridSpec{box, 3});
  const std::string csv = stratification_csv(report);
  CHECK(csv.rfind("x1,x2,x3,d,residual\n-1,-1,-1,3,1\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 28);
  const json j = json::parse(stratification_json(report));
  CHECK(j["counts_by_d"]["3"] == 27);
  CHECK(j["total"] == 27);
  CHECK(j["non_involutive"] == 27);

  const Frame degenerate({KVectorField(1, {Expr::variable(0), 0.0, 0.0}, box),
                          KVectorField(1, {0.0, 1.0, 0.0}, box)});
  const auto dr = stratify(degenerate, GridSpec{box, 3});
  const std::string dcsv = stratification_csv(dr);
  CHECK(dcsv.find("\n0,-1,-1,,") != std::string::npos);
}

TEST_CASE("config files") {
  const auto dir = scratch_dir();
  write(dir / "contact.fk", "n=3; v1=[1,0,0]; v2=[0,1,x1]\n");
  const auto c = parse_config(
      R"({"scenario": "custom", "fields": "contact.fk", "seed": 7, "forms": 3,
          "resolution": 16, "grid": 5})",
      dir.string());
  CHECK(c.scenario == "custom");
  REQUIRE(c.fields);
  CHECK(c.options.ensemble.seed == 7);
  CHECK(c.options.ensemble.count == 3);
  CHECK(c.options.resolution == 16);
  CHECK(c.options.grid == 5);

  const auto named = parse_config(R"({"scenario": "parabola", "refine": 2})");
  CHECK(named.scenario == "parabola");
  CHECK(named.options.refine == 2);

  CHECK_THROWS_AS(parse_config(R"({"scenario": "parabola", "sead": 1})"), Error);
  CHECK_THROWS_AS(parse_config(R"({"seed": 1})"), Error);
  CHECK_THROWS_AS(parse_config(R"({"scenario": "custom"})"), Error);
  CHECK_THROWS_AS(parse_config(R"({"scenario": 3})"), Error);
  CHECK_THROWS_AS(parse_config(R"({"scenario": "parabola", "seed": 1.5})"),
                  Error);
  CHECK_THROWS_AS(parse_config("{"), Error);
  CHECK_THROWS_AS(parse_config("[]"), Error);
  CHECK_THROWS_AS(
      parse_config(R"({"scenario": "custom", "fields": "missing.fk"})",
                   dir.string()),
      Error);
  write(dir / "broken.fk", "v1=[1,0");
  CHECK_THROWS_AS(
      parse_config(R"({"scenario": "custom", "fields": "broken.fk"})",
                   dir.string()),
      ParseError);
}

TEST_CASE("custom scenario") {
  ScenarioOptions opt;
  opt.ensemble.count = 3;
  opt.resolution = 16;
  opt.grid = 5;
  const auto contact = parse_fields("n=3; v1=[1,0,0]; v2=[0,1,x1]");
  const auto r = run_custom(contact, opt);
  CHECK(r.pass());
  REQUIRE(r.stratification);
  CHECK(r.stratification->counts_by_d.at(3) == 125);

  // τ = e13 is not tangent to the contact planes.
  const auto transverse =
      parse_fields("n=3; v1=[1,0,0]; v2=[0,1,x1]; tau=[0,1,0]");
  const auto t = run_custom(transverse, opt);
  CHECK_FALSE(t.pass());
  CHECK_FALSE(t.checks.front().pass);

  const auto plane = parse_fields("n=4; v1=[1,0,0,0]; v2=[0,1,0,0]");
  const auto p = run_custom(plane, opt);
  CHECK(p.pass());
  CHECK(p.checks.back().note == "implemented for k = 2 in R^3");
}

TEST_CASE("run_config dispatches") {
  ScenarioConfig c;
  c.scenario = "nope";
  CHECK_THROWS_AS(run_config(c), Error);
  c.scenario = "parabola";
  c.options.ensemble.count = 2;
  const auto r = run_config(c);
  CHECK(r.scenario == "parabola");
  CHECK(r.pass());
}
