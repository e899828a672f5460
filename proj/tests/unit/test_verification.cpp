#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kreinphoton/errors.hpp"
#include "kreinphoton/verification.hpp"

using namespace kreinphoton;
using nlohmann::json;

namespace {

json quick_json() {
  return {{"grid", {{"angular_order", 16}, {"radial_order", 32}, {"uv_cutoff", 60.0}, {"self_test_tolerance", nullptr}}},
          {"seed", 99},
          {"samples",
           {{"eigen_points", 50}, {"lorentz_samples", 10}, {"positivity_states", 3}, {"product_states", 1},
            {"isometry_pairs", 2}, {"transversal_pairs", 1}, {"group_triples", 2}, {"pointwise_points", 4},
            {"theta_samples", 10}, {"fock_states", 3}, {"fock_cutoff", 2}}}};
}

SuiteConfig quick(std::vector<std::string> suites) {
  json j = quick_json();
  j["suites"] = suites;
  return SuiteConfig::from_json(j);
}

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("kreinphoton-test-" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config parsing") {
  const SuiteConfig c = SuiteConfig::from_json(quick_json());
  CHECK(c.grid.angular_order == 16);
  CHECK_FALSE(c.grid.self_test_tolerance.has_value());
  CHECK(c.seed == 99);
  CHECK(c.samples.fock_cutoff == 2);
  CHECK(c.selected_suites() == suite_names());

  const SuiteConfig round = SuiteConfig::from_json(c.to_json());
  CHECK(round.grid == c.grid);
  CHECK(round.samples == c.samples);

  CHECK_THROWS_AS(SuiteConfig::from_json({{"sede", 1}}), ConfigError);
  CHECK_THROWS_AS(SuiteConfig::from_json({{"seed", "one"}}), ConfigError);
  CHECK_THROWS_AS(SuiteConfig::from_json({{"suites", {"eigensystem", "bogus"}}}), ConfigError);
  CHECK_THROWS_AS(SuiteConfig::from_json({{"grid", {{"angular_order", 1}}}}), ConfigError);
  CHECK_THROWS_AS(SuiteConfig::from_json({{"samples", {{"isometry_pairs", 0}}}}), ConfigError);
  CHECK_THROWS_AS(SuiteConfig::from_json({{"tolerances", {{"isometry", -1.0}}}}), ConfigError);
  CHECK_THROWS_AS(SuiteConfig::load("/nonexistent/config.json"), ConfigError);
  CHECK_THROWS_AS(suite_check_ids("bogus"), ConfigError);
}

TEST_CASE("tolerance overrides resolve from the most specific key") {
  SuiteConfig c;
  c.tolerances = {{"isometry", 1.0}, {"lopuszanski", 2.0}, {"lopuszanski.group_law", 3.0}};
  CHECK(c.tolerance("lopuszanski.group_law", 0.5) == 3.0);
  CHECK(c.tolerance("lopuszanski.covariance", 0.5) == 2.0);
  CHECK(c.tolerance("wavefunction.sesquilinearity", 0.5) == 1.0);
  CHECK(c.tolerance("fock.eta_involution", 0.5) == 0.5);
}

TEST_CASE("check ids cover each invariant once") {
  std::set<std::string> ids;
  std::size_t total = 0;
  for (const auto& s : suite_names()) {
    for (const auto& id : suite_check_ids(s)) {
      ids.insert(id);
      ++total;
    }
  }
  CHECK(total == ids.size());
  CHECK(ids.size() == 28);
  std::map<std::string, int> per_module;
  for (const auto& id : ids) ++per_module[id.substr(0, id.find('.'))];
  CHECK(per_module["geometry"] == 4);
  CHECK(per_module["krein_core"] == 4);
  CHECK(per_module["wavefunction"] == 3);
  CHECK(per_module["lopuszanski"] == 4);
  CHECK(per_module["transversal"] == 6);
  CHECK(per_module["schwartz"] == 3);
  CHECK(per_module["fock"] == 4);
}

TEST_CASE("quick run of every suite passes and is deterministic") {
  const SuiteConfig c = quick({});
  const VerificationReport a = run_suite(c);
  CHECK(a.passed());
  CHECK(a.exit_code() == 0);
  REQUIRE(a.suites.size() == suite_names().size());
  for (const auto& s : a.suites) {
    const auto& ids = suite_check_ids(s.name);
    REQUIRE(s.checks.size() == ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      CHECK(s.checks[i].id == ids[i]);
      CHECK_MESSAGE(s.checks[i].passed, s.checks[i].id << ": " << s.checks[i].detail);
    }
  }
  const VerificationReport b = run_suite(c);
  CHECK(report_body(a).dump() == report_body(b).dump());
  CHECK(report_body(a)["config"].contains("seed"));

  SuiteConfig other = c;
  other.seed = 100;
  CHECK(report_body(run_suite(other)).dump() != report_body(a).dump());
}

TEST_CASE("unreachable tolerances are recorded as failures") {
  SuiteConfig c = quick({"isometry"});
  c.tolerances["isometry"] = 1e-30;
  const VerificationReport r = run_suite(c);
  CHECK_FALSE(r.passed());
  CHECK(r.exit_code() == 1);
  CHECK(r.failures() >= 5);
  for (const auto& check : r.suites.front().checks) CHECK(check.tolerance == 1e-30);

  SuiteConfig unknown = quick({"theta"});
  unknown.tolerances["lopuszanski.isometry"] = 1.0;
  CHECK_THROWS_AS(run_suite(unknown), ConfigError);
}

TEST_CASE("report formats") {
  const VerificationReport r = run_suite(quick({"theta", "schwartz"}));
  const json j = json::parse(format_report(r, ReportFormat::json));
  CHECK(j["schema_version"] == VerificationReport::kSchemaVersion);
  CHECK(j["body"]["suites"].size() == 2);
  CHECK(j["timing"].contains("total_ms"));
  CHECK_FALSE(j["body"].dump().find("runtime") != std::string::npos);

  const std::string csv = format_report(r, ReportFormat::csv);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 1 + 3);
  const std::string md = format_report(r, ReportFormat::markdown);
  CHECK(md.find("| transversal.rotation_block_orthogonality | pass |") != std::string::npos);

  CHECK(parse_format("markdown") == ReportFormat::markdown);
  CHECK_THROWS_AS(parse_format("xml"), ConfigError);

  const auto dir = scratch("emit");
  const auto path = emit_report(r, ReportFormat::csv, dir / "nested");
  CHECK(path.filename() == "report.csv");
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == csv);

  write_text_file(dir / "blocker", "x");
  CHECK_THROWS_AS(emit_report(r, ReportFormat::json, dir / "blocker"), IOError);
  std::filesystem::remove_all(dir);
}
