#pragma once

// Verification suites over the library invariants and their reports.
//
// Suites and check ids:
//   eigensystem  geometry.{antihomomorphism, metric_preservation, cone_closure,
//                quadrature_convergence}
//                krein_core.{spectral_reconstruction, involution,
//                krein_null_gauge, transversal_eigenvalue_one}
//   isometry     wavefunction.{sesquilinearity, hilbert_positivity,
//                krein_hilbert_agreement_tr}
//                lopuszanski.{krein_isometry, group_law, covariance,
//                unboundedness_witness}
//   transversal  transversal.{projector_idempotence, lorentz_condition,
//                positivity_norm_identity, induced_unitarity, induced_group_law}
//   theta        transversal.rotation_block_orthogonality
//   schwartz     schwartz.{restriction_linearity, fourier_linearity,
//                library_membership}
//   fock         fock.{eta_involution, ccr_below_ceiling,
//                commutator_antisymmetry, physical_positivity}
//
// Checks compare `measured` against `tolerance`; most pass when measured <=
// tolerance, lower-bound checks (the unboundedness witness) when measured >
// tolerance. Checks against quadrature error estimates report the worst
// ratio deviation / (k * estimate + rounding floor) with tolerance 1.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kreinphoton/cone_geometry.hpp"

namespace kreinphoton {

struct SampleCounts {
  int eigen_points = 1000;
  int lorentz_samples = 200;
  int positivity_states = 200;
  int product_states = 4;
  int isometry_pairs = 12;
  int transversal_pairs = 12;
  int group_triples = 30;
  int pointwise_points = 64;
  int theta_samples = 200;
  int fock_states = 50;
  int fock_cutoff = 3;

  bool operator==(const SampleCounts&) const = default;
};

struct SuiteConfig {
  GridConfig grid;
  std::uint64_t seed = 20161026;
  /// Keyed by check id, module prefix ("lopuszanski") or suite name
  /// ("isometry"); the most specific key wins.
  std::map<std::string, double> tolerances;
  /// Empty selects every suite.
  std::vector<std::string> suites;
  std::filesystem::path out_dir = ".";
  SampleCounts samples;
  /// 0 keeps the library default.
  unsigned threads = 0;

  /// Throws ConfigError on unknown keys, wrong types or unknown suites.
  static SuiteConfig from_json(const nlohmann::json& j);
  static SuiteConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  /// Resolves `suites` (empty -> all) and validates names.
  std::vector<std::string> selected_suites() const;
  double tolerance(const std::string& check_id, double fallback) const;
};

const std::vector<std::string>& suite_names();
/// Check ids of a suite in report order. Throws ConfigError for unknown names.
const std::vector<std::string>& suite_check_ids(std::string_view suite);

enum class Comparison { at_most, greater_than };

struct CheckResult {
  std::string id;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::at_most;
  /// Largest quadrature error estimate involved (0 for algebraic checks).
  double estimated_error = 0.0;
  int samples = 0;
  std::string detail;
  double runtime_ms = 0.0;
};

struct SuiteReport {
  std::string name;
  std::vector<CheckResult> checks;
  double runtime_ms = 0.0;
};

struct VerificationReport {
  static constexpr int kSchemaVersion = 1;

  SuiteConfig config;
  std::vector<SuiteReport> suites;

  bool passed() const;
  int failures() const;
  /// 0 when every check passed, 1 otherwise.
  int exit_code() const { return passed() ? 0 : 1; }
};

/// Runs the selected suites. Check failures (including library exceptions
/// raised inside a check) are recorded; ConfigError propagates.
VerificationReport run_suite(const SuiteConfig& config);

/// Deterministic part of the JSON report (no runtimes).
nlohmann::json report_body(const VerificationReport& report);
/// {"schema_version", "body", "timing"}
nlohmann::json report_json(const VerificationReport& report);

enum class ReportFormat { json, csv, markdown };

/// Throws ConfigError for unknown names.
ReportFormat parse_format(std::string_view name);
std::string extension(ReportFormat format);

std::string format_report(const VerificationReport& report, ReportFormat format);

/// Writes out_dir/<stem>.<ext>, creating out_dir if needed; throws IOError.
std::filesystem::path emit_report(const VerificationReport& report, ReportFormat format,
                                  const std::filesystem::path& out_dir, const std::string& stem = "report");

/// Writes text to path, creating parent directories; throws IOError.
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Library version, compiler and Eigen version.
nlohmann::json environment_fingerprint();

}  // namespace kreinphoton
