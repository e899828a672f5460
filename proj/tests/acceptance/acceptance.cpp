// Acceptance criteria 1-11 at their stated tolerances on the default grid.
// Prints one line per criterion and exits non-zero if any fails.
//
// usage: acceptance <path to the kreinphoton executable>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "kreinphoton/errors.hpp"
#include "kreinphoton/fock_gb.hpp"
#include "kreinphoton/krein_core.hpp"
#include "kreinphoton/lopuszanski.hpp"
#include "kreinphoton/random_states.hpp"
#include "kreinphoton/schwartz_fourier.hpp"
#include "kreinphoton/transversal.hpp"
#include "kreinphoton/verification.hpp"

using namespace kreinphoton;

namespace {

constexpr std::uint64_t kSeed = 20161026;
constexpr double kFloor = 1e-13;

struct Outcome {
  bool passed = false;
  std::string summary;
};

std::string fmt(const char* format, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

const QuadratureGrid& grid() {
  static const QuadratureGrid g{GridConfig{}};
  return g;
}

std::vector<EigenCrossCheck>& cross_checks() {
  static std::vector<EigenCrossCheck> checks = [] {
    Rng rng = make_rng(kSeed, "acceptance.eigen");
    std::vector<EigenCrossCheck> out;
    for (int i = 0; i < 1000; ++i) out.push_back(cross_check_extended(random_cone_point(rng, 1e-3, 1e3)));
    return out;
  }();
  return checks;
}

Outcome criterion1() {
  double recon = 0.0, resid = 0.0;
  for (const auto& c : cross_checks()) {
    recon = std::max(recon, c.reconstruction);
    resid = std::max(resid, c.eigen_residual);
  }
  return {recon < 1e-10 && resid < 1e-10,
          fmt("eigensystem cross-validation, 1000 points r in [1e-3, 1e3]: |B - sum l w w^T| = %.2e, "
              "max |B w - l w| = %.2e (< 1e-10)",
              recon, resid)};
}

Outcome criterion2() {
  double worst = 0.0;
  for (const auto& c : cross_checks()) worst = std::max(worst, c.involution);
  return {worst < 1e-9, fmt("involution |(J B)^2 - I| = %.2e on the same sample (< 1e-9)", worst)};
}

// deviation within 3x the combined estimate (plus a rounding floor)
bool isometric(const IsometryReport& r) {
  const double scale = std::abs(r.hilbert_before.value) + std::abs(r.hilbert_after.value);
  return r.krein_deviation() <= 3.0 * r.estimated_error + kFloor * scale;
}

Outcome criterion3() {
  Rng rng = make_rng(kSeed, "acceptance.isometry");
  int failures = 0, large_estimates = 0;
  double worst_ratio = 0.0, worst_estimate = 0.0;
  for (int i = 0; i < 50; ++i) {
    const RepElement g = i % 5 == 4 ? RepElement::conjugate_lorentz(random_lorentz(rng, 2.0))
                                    : RepElement::lorentz(random_lorentz(rng, 2.0));
    const MomentumWaveFunction phi = random_mixture(rng);
    const MomentumWaveFunction psi = i % 2 == 0 ? phi : random_mixture(rng);
    const IsometryReport r = verify_isometry(g, phi, psi, grid());
    if (!isometric(r)) ++failures;
    if (r.estimated_error > 1e-6) ++large_estimates;
    worst_estimate = std::max(worst_estimate, r.estimated_error);
    worst_ratio = std::max(worst_ratio, r.krein_deviation() / r.estimated_error);
  }
  return {failures == 0 && large_estimates == 0,
          fmt("Krein isometry, 50 (rapidity <= 2 boost x rotation, mixed state) pairs: %g outside 3x estimate, "
              "worst deviation/estimate %.2f, largest estimate %.2e (<= 1e-6)",
              failures, worst_ratio, worst_estimate)};
}

Outcome criterion4() {
  Rng rng = make_rng(kSeed, "acceptance.witness");
  const MomentumWaveFunction phi = parse_state("wr2:exp_ir");
  const RepElement g = RepElement::lorentz(SL2C::boost(Vec3::UnitZ(), 1.5));
  const IsometryReport self = verify_isometry(g, phi, phi, grid());
  const IsometryReport cross = verify_isometry(g, phi, random_mixture(rng), grid());
  const double ratio = self.hilbert_norm_ratio();
  const bool preserved = isometric(self) && isometric(cross) && self.estimated_error <= 1e-6 &&
                         cross.estimated_error <= 1e-6;
  return {std::abs(ratio - 1.0) > 0.01 && preserved,
          fmt("unboundedness witness wr2:exp_ir, z-boost chi = 1.5: Hilbert norm ratio %.4f (|ratio - 1| > 0.01), ",
              ratio) +
              fmt("Krein deviations %.1e / %.1e, estimates %.1e / %.1e", self.krein_deviation(),
                  cross.krein_deviation(), self.estimated_error, cross.estimated_error) +
              (preserved ? " (preserved within 3x, <= 1e-6)" : " [Krein products not preserved]")};
}

Outcome criterion5() {
  Rng rng = make_rng(kSeed, "acceptance.norm_identity");
  int failures = 0;
  double worst = 0.0, smallest = INFINITY;
  for (int i = 0; i < 50; ++i) {
    const TransversalPair pair = random_pair(rng);
    const SampledWaveFunction s(embed(pair), grid());
    const InnerProductReport k = krein_inner(s, s);
    const InnerProductReport n = pair_norm_squared(pair, grid());
    const double allowance = 2.0 * (k.estimated_error + n.estimated_error) + kFloor * std::abs(n.value);
    const double dev = std::abs(k.value - n.value);
    if (dev > allowance || k.value.real() < -allowance) ++failures;
    worst = std::max(worst, dev / allowance);
    smallest = std::min(smallest, k.value.real());
  }
  return {failures == 0, fmt("transversal norm identity, 50 pairs: %g outside 2x error, worst deviation/allowance "
                             "%.2e, smallest Krein norm %.3g > 0",
                             failures, worst, smallest)};
}

Outcome criterion6() {
  Rng rng = make_rng(kSeed, "acceptance.induced");
  int failures = 0;
  double worst_ratio = 0.0;
  for (int i = 0; i < 20; ++i) {
    const SL2C a = random_lorentz(rng, 2.0);
    const TransversalPair pair = random_pair(rng);
    const InnerProductReport before = pair_norm_squared(pair, grid());
    const InnerProductReport after = pair_norm_squared(induced_act(a, pair), grid());
    const double allowance = 3.0 * (before.estimated_error + after.estimated_error) + kFloor * std::abs(before.value);
    const double dev = std::abs(after.value - before.value);
    if (dev > allowance) ++failures;
    worst_ratio = std::max(worst_ratio, dev / allowance);
  }
  double group = 0.0;
  for (int i = 0; i < 30; ++i) {
    const SL2C a = random_lorentz(rng, 2.0);
    const SL2C b = random_lorentz(rng, 2.0);
    const TransversalPair pair = random_pair(rng);
    const TransversalPair lhs = induced_act(a, induced_act(b, pair));
    const TransversalPair rhs = induced_act(a * b, pair);
    for (int k = 0; k < 64; ++k) {
      const ConePoint p = random_cone_point(rng, 0.05, 20.0);
      group = std::max({group, std::abs(lhs.f_plus(p) - rhs.f_plus(p)), std::abs(lhs.f_minus(p) - rhs.f_minus(p))});
    }
  }
  return {failures == 0 && group < 1e-9,
          fmt("induced unitarity, 20 pairs: %g outside 3x error (worst ratio %.2f); group law over 30 triples: "
              "max deviation %.2e (< 1e-9)",
              failures, worst_ratio, group)};
}

Outcome criterion7() {
  Rng rng = make_rng(kSeed, "acceptance.remainder");
  const QuadratureGrid& g = grid();
  std::vector<std::vector<Vec4c>> partners;
  for (int i = 0; i < 20; ++i) partners.push_back(sample(embed(random_pair(rng)), g));
  double norm = 0.0, product = 0.0;
  for (int i = 0; i < 30; ++i) {
    const SL2C a = random_lorentz(rng, 2.0);
    const auto rem = sample(unphysical_remainder(a, random_pair(rng)), g);
    norm = std::max(norm, std::abs(krein_sum(g, rem, rem)));
    for (const auto& t : partners) product = std::max(product, std::abs(krein_sum(g, rem, t)));
  }
  return {norm <= 1e-7 && product <= 1e-7,
          fmt("unphysical remainder, 30 pairs x 20 transversal states: max Krein norm %.2e, max Krein product "
              "%.2e (<= 1e-7)",
              norm, product)};
}

Outcome criterion8() {
  Rng rng = make_rng(kSeed, "acceptance.helicity");
  double residual = 0.0;
  int used = 0;
  for (int i = 0; i < 1000; ++i) {
    const SL2C a = random_lorentz(rng, 2.0);
    const ConePoint p = random_cone_point(rng, 1e-2, 1e2);
    try {
      residual = std::max(residual, extract_theta(a, p).residual);
      ++used;
    } catch (const AxisZone&) {
    }
  }
  double eigen = 0.0;
  for (double psi : {std::numbers::pi / 6, std::numbers::pi / 3, std::numbers::pi / 2, std::numbers::pi}) {
    for (int k = 0; k < 25; ++k) {
      const ConePoint p = random_cone_point(rng, 1e-2, 1e2);
      const auto ev = helicity_eigencheck(psi, p);
      // {e^{i psi}, e^{-i psi}} as a set; for psi = pi both are -1
      eigen = std::max(eigen, std::abs(ev[0] - std::polar(1.0, psi)));
      eigen = std::max(eigen, std::abs(ev[1] - std::polar(1.0, -psi)));
    }
  }
  return {residual < 1e-10 && eigen < 1e-9,
          fmt("helicity: block residual %.2e over %g samples (< 1e-10); eigenvalues vs e^{+-i psi} for psi in "
              "{pi/6, pi/3, pi/2, pi}: max deviation %.2e (< 1e-9)",
              residual, used, eigen)};
}

Outcome criterion9() {
  int wrong = 0, checked = 0;
  std::string listing;
  for (const auto& name : library_test_function_names()) {
    const TestFunction f = library_test_function(name);
    for (const TestFunction& g : {f, restrict_to_cone(f)}) {
      bool member = false;
      try {
        member = s0_membership(g, 4, 1e-8).is_member;
      } catch (const Error&) {
        member = false;
      }
      ++checked;
      if (member != library_is_s0(name)) ++wrong;
    }
    listing += (listing.empty() ? "" : ", ") + name + (library_is_s0(name) ? "" : " (non-member)");
  }
  return {wrong == 0, fmt("S0 membership at K = 4, tol = 1e-8, %g checks before/after restriction: %g misclassified",
                          checked, wrong) +
                          " [" + listing + "]"};
}

Outcome criterion10() {
  Rng rng = make_rng(kSeed, "acceptance.fock");
  const TestFunction f =
      vector_test_function("s0_gauss", Vec4c(1.0, 0.0, 0.0, 0.5)).translated(random_translation(rng, 0.6));
  const TestFunction g =
      vector_test_function("s0_shell", Vec4c(0.0, 0.3, 0.0, 1.0)).translated(random_translation(rng, 0.6));
  const auto basis =
      std::make_shared<const ModeBasis>(build_mode_basis({cone_wavefunction(f), cone_wavefunction(g)}, grid()));
  const FockSector s(basis, 3);
  const FockOperator eta = gupta_bleuler_eta(s);
  const auto d = static_cast<Eigen::Index>(s.dimension());
  const double involution = max_abs(eta.matrix * eta.matrix - ComplexMatrix::Identity(d, d));

  double covariance = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    ComplexVector c(static_cast<Eigen::Index>(s.modes()));
    for (auto& x : c) x = random_complex(rng);
    const ComplexMatrix lhs = eta.matrix * s.creation(c).matrix * eta.matrix;
    // J' applied pointwise to the mode expansion, then re-expanded
    MomentumWaveFunction phi;
    for (std::size_t i = 0; i < s.modes(); ++i) phi = phi + c[static_cast<Eigen::Index>(i)] * basis->modes[i];
    const ComplexVector jc = basis->coefficients(ModeBasis::apply_j_prime(phi));
    covariance = std::max({covariance, max_abs(lhs - s.creation(s.j_matrix() * c).matrix),
                           max_abs(lhs - s.creation(jc).matrix)});
  }

  const CommutatorCheck fg = commutator_check(f, g, s, eta);
  const CommutatorCheck gf = commutator_check(g, f, s, eta);
  const double oracle = std::max(std::abs(fg.cnumber - fg.oracle_value), std::abs(fg.cnumber - fg.pauli_jordan));
  const double antisymmetry = std::abs(fg.cnumber + gf.cnumber);
  const double cnumber = std::max(fg.matrix_residual, gf.matrix_residual);
  const bool ok = involution < 1e-7 && covariance < 1e-7 && cnumber < 1e-7 && oracle < 1e-7 && antisymmetry < 1e-10;
  return {ok, fmt("Fock sector (%g modes, N = 3): |eta^2 - I| = %.1e, |eta a+ eta - a+ J'| = %.1e, ", s.modes(),
                  involution, covariance) +
                  fmt("c-number residual %.1e, vacuum value vs oracle %.1e (< 1e-7), antisymmetry %.1e (< 1e-10)",
                      cnumber, oracle, antisymmetry)};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion11(const std::string& cli) {
  if (cli.empty()) return {false, "determinism: no path to the kreinphoton executable given"};
  const auto dir = std::filesystem::temp_directory_path() / ("kreinphoton-acceptance-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const nlohmann::json config = {
      {"grid", {{"angular_order", 12}, {"radial_order", 24}, {"uv_cutoff", 50.0}, {"self_test_tolerance", nullptr}}},
      {"seed", 1234},
      {"samples",
       {{"eigen_points", 100}, {"lorentz_samples", 20}, {"positivity_states", 5}, {"product_states", 2},
        {"isometry_pairs", 2}, {"transversal_pairs", 2}, {"group_triples", 3}, {"pointwise_points", 8},
        {"theta_samples", 20}, {"fock_states", 5}, {"fock_cutoff", 2}}}};
  write_text_file(dir / "config.json", config.dump(2));
  std::vector<std::string> bodies;
  std::string status;
  for (int run = 0; run < 2; ++run) {
    const auto out = dir / ("run" + std::to_string(run));
    const std::string cmd = "\"" + cli + "\" --config \"" + (dir / "config.json").string() + "\" --seed 1234 --out-dir \"" +
                            out.string() + "\" run-all > \"" + (dir / "stdout.txt").string() + "\" 2>&1";
    const int rc = std::system(cmd.c_str());
    status += fmt(run ? ", %g" : "exit codes %g", rc == 0 ? 0 : 1);
    try {
      bodies.push_back(nlohmann::json::parse(read_file(out / "run-all.json")).at("body").dump());
    } catch (const std::exception& e) {
      bodies.push_back(std::string("unreadable: ") + e.what());
    }
  }
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);
  const bool same = bodies[0] == bodies[1] && bodies[0].rfind("unreadable", 0) != 0;
  return {same, "determinism: run-all twice with seed 1234, report bodies " +
                    std::string(same ? "byte-identical" : "differ") + " (" + std::to_string(bodies[0].size()) +
                    " bytes; " + status + ")"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::function<Outcome()>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5, criterion6,
      criterion7, criterion8, criterion9, criterion10, [&] { return criterion11(cli); }};
  int failed = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.passed) ++failed;
    std::printf("criterion %2zu %s  %s [%.1fs]\n", i + 1, o.passed ? "PASS" : "FAIL", o.summary.c_str(), secs);
    std::fflush(stdout);
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of %zu criteria failed, %.1fs\n", failed, criteria.size(), total);
  return failed == 0 ? 0 : 1;
}
