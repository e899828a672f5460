#include "kreinphoton/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

#include "kreinphoton/errors.hpp"
#include "kreinphoton/fock_gb.hpp"
#include "kreinphoton/krein_core.hpp"
#include "kreinphoton/lopuszanski.hpp"
#include "kreinphoton/parallel.hpp"
#include "kreinphoton/random_states.hpp"
#include "kreinphoton/schwartz_fourier.hpp"
#include "kreinphoton/transversal.hpp"

#ifndef KREINPHOTON_VERSION
#define KREINPHOTON_VERSION "unknown"
#endif

namespace kreinphoton {
namespace {

using nlohmann::json;
constexpr double kRoundingFloor = 1e-13;

// --- configuration -----------------------------------------------------------

template <class T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

GridConfig grid_from_json(const json& j) {
  reject_unknown(j, {"angular_order", "radial_order", "ir_cutoff", "uv_cutoff", "radial_shift", "self_test_tolerance"},
                 "grid");
  GridConfig g;
  if (j.contains("angular_order")) g.angular_order = get_as<int>(j["angular_order"], "grid.angular_order");
  if (j.contains("radial_order")) g.radial_order = get_as<int>(j["radial_order"], "grid.radial_order");
  if (j.contains("ir_cutoff")) g.ir_cutoff = get_as<double>(j["ir_cutoff"], "grid.ir_cutoff");
  if (j.contains("uv_cutoff")) g.uv_cutoff = get_as<double>(j["uv_cutoff"], "grid.uv_cutoff");
  if (j.contains("radial_shift")) g.radial_shift = get_as<double>(j["radial_shift"], "grid.radial_shift");
  if (j.contains("self_test_tolerance")) {
    const json& t = j["self_test_tolerance"];
    if (t.is_null()) {
      g.self_test_tolerance.reset();
    } else {
      g.self_test_tolerance = get_as<double>(t, "grid.self_test_tolerance");
    }
  }
  g.validate();
  return g;
}

json grid_to_json(const GridConfig& g) {
  json j{{"angular_order", g.angular_order},
         {"radial_order", g.radial_order},
         {"ir_cutoff", g.ir_cutoff},
         {"uv_cutoff", g.uv_cutoff},
         {"radial_shift", g.radial_shift}};
  j["self_test_tolerance"] = g.self_test_tolerance ? json(*g.self_test_tolerance) : json(nullptr);
  return j;
}

#define KREINPHOTON_SAMPLE_FIELDS(X)                                                                       \
  X(eigen_points) X(lorentz_samples) X(positivity_states) X(product_states) X(isometry_pairs)              \
      X(transversal_pairs) X(group_triples) X(pointwise_points) X(theta_samples) X(fock_states) X(fock_cutoff)

SampleCounts samples_from_json(const json& j) {
#define KREINPHOTON_NAME(f) #f,
  reject_unknown(j, {KREINPHOTON_SAMPLE_FIELDS(KREINPHOTON_NAME)}, "samples");
#undef KREINPHOTON_NAME
  SampleCounts s;
#define KREINPHOTON_READ(f)                                                        \
  if (j.contains(#f)) {                                                            \
    s.f = get_as<int>(j[#f], "samples." #f);                                       \
    if (s.f < 1) throw ConfigError("samples." #f " must be positive");             \
  }
  KREINPHOTON_SAMPLE_FIELDS(KREINPHOTON_READ)
#undef KREINPHOTON_READ
  return s;
}

json samples_to_json(const SampleCounts& s) {
  json j = json::object();
#define KREINPHOTON_WRITE(f) j[#f] = s.f;
  KREINPHOTON_SAMPLE_FIELDS(KREINPHOTON_WRITE)
#undef KREINPHOTON_WRITE
  return j;
}

// --- checks ------------------------------------------------------------------

struct Measurement {
  double measured = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::at_most;
  double estimated_error = 0.0;
  int samples = 0;
  std::string detail;
};

struct Context {
  const SuiteConfig& config;
  const QuadratureGrid& grid;
  std::optional<std::vector<EigenCrossCheck>> cross_checks;
  std::optional<std::vector<ConePoint>> eigen_points;

  Rng rng(const std::string& id) const { return make_rng(config.seed, id); }
  const SampleCounts& n() const { return config.samples; }

  const std::vector<ConePoint>& points() {
    if (!eigen_points) {
      Rng r = rng("krein_core.points");
      eigen_points.emplace();
      for (int i = 0; i < n().eigen_points; ++i) eigen_points->push_back(random_cone_point(r, 1e-3, 1e3));
    }
    return *eigen_points;
  }

  const std::vector<EigenCrossCheck>& extended_checks() {
    if (!cross_checks) {
      const auto& pts = points();
      cross_checks.emplace(pts.size());
      parallel_for_chunks(pts.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) (*cross_checks)[i] = cross_check_extended(pts[i]);
      });
    }
    return *cross_checks;
  }

  std::vector<ConePoint> pointwise_points(Rng& r) const {
    std::vector<ConePoint> pts;
    for (int i = 0; i < n().pointwise_points; ++i) pts.push_back(random_cone_point(r, 0.1, 10.0));
    return pts;
  }
};

using CheckFn = std::function<Measurement(Context&, Rng&)>;

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

double max_abs4(const Mat4& m) { return m.cwiseAbs().maxCoeff(); }

// ratio of a deviation to the allowance k * estimate + rounding floor
double allowance_ratio(double deviation, double k, double estimate, double scale) {
  return deviation / (k * estimate + kRoundingFloor * std::max(scale, 1e-300));
}

// geometry

Measurement antihomomorphism(Context& ctx, Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < ctx.n().lorentz_samples; ++i) {
    const SL2C a = random_lorentz(rng);
    const SL2C b = random_lorentz(rng);
    const Mat4 lhs = spinor_to_lorentz(a * b).matrix();
    const Mat4 rhs = spinor_to_lorentz(b).matrix() * spinor_to_lorentz(a).matrix();
    worst = std::max(worst, max_abs4(lhs - rhs));
  }
  return {worst, 1e-10, Comparison::at_most, 0.0, ctx.n().lorentz_samples,
          "max |Lambda(alpha beta) - Lambda(beta) Lambda(alpha)|, rapidities <= 2"};
}

Measurement metric_preservation(Context& ctx, Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < ctx.n().lorentz_samples; ++i) {
    const SL2C a = random_lorentz(rng);
    const SL2C b = random_lorentz(rng);
    for (const SL2C& g : {a, b, a * b, a.inverse()}) worst = std::max(worst, spinor_to_lorentz(g).metric_defect());
  }
  return {worst, 1e-10, Comparison::at_most, 0.0, 4 * ctx.n().lorentz_samples, "max |Lambda^T g Lambda - g|"};
}

Measurement cone_closure(Context& ctx, Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < ctx.n().lorentz_samples; ++i) {
    const LorentzMatrix lambda = spinor_to_lorentz(random_lorentz(rng));
    const ConePoint p = random_cone_point(rng, 1e-3, 1e3);
    const Vec4 raw = lambda.apply(p.four_momentum());
    const ConePoint q = lorentz_act_point(lambda, p);
    const double scale = std::max(1.0, q.r());
    worst = std::max(worst, std::abs(raw[0] - raw.tail<3>().norm()) / scale);
    worst = std::max(worst, (q.spatial() - raw.tail<3>()).cwiseAbs().maxCoeff() / scale);
  }
  return {worst, 1e-10, Comparison::at_most, 0.0, ctx.n().lorentz_samples,
          "max |(Lambda p)^0 - |Lambda p|| / max(1, r) and image drift, r in [1e-3, 1e3]"};
}

Measurement quadrature_convergence(Context& ctx, Rng&) {
  const GridConfig& base = ctx.grid.config();
  const double ir = base.ir_cutoff;
  const double uv = base.uv_cutoff;
  // relative distance of the truncated integral from 2 pi
  const double floor = std::abs((1.0 + uv) * std::exp(-uv) - (1.0 - (1.0 + ir) * std::exp(-ir))) + 1e-14;
  std::vector<double> errors;
  std::string detail = "relative errors:";
  for (int order = 4; order <= 64; order *= 2) {
    GridConfig c = base;
    c.angular_order = 2;
    c.radial_order = order;
    c.self_test_tolerance.reset();
    const QuadratureGrid g(c);
    const double value = integrate(g, [](const ConePoint& p) { return Complex(std::exp(-p.r())); }).real();
    errors.push_back(std::abs(value - 2.0 * std::numbers::pi) / (2.0 * std::numbers::pi));
    detail += fmt(" %.3g", errors.back());
  }
  double worst = 0.0;
  int steps = 0;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (errors[i + 1] <= 2.0 * floor) break;
    worst = std::max(worst, errors[i + 1] / errors[i]);
    ++steps;
  }
  detail += fmt("; floor %.3g, %g doubling steps above it", floor, steps);
  if (steps == 0) detail += " (floor reached at the first doubling)";
  return {worst, 0.5, Comparison::at_most, 0.0, static_cast<int>(errors.size()), detail};
}

// krein_core

Measurement spectral_reconstruction(Context& ctx, Rng&) {
  double worst = 0.0, worst_double = 0.0;
  for (std::size_t i = 0; i < ctx.points().size(); ++i) {
    const EigenCrossCheck& c = ctx.extended_checks()[i];
    worst = std::max({worst, c.reconstruction, c.eigen_residual});
    const EigenCrossCheck d = cross_check_double(ctx.points()[i]);
    worst_double = std::max({worst_double, d.reconstruction, d.eigen_residual});
  }
  return {worst, 1e-10, Comparison::at_most, 0.0, static_cast<int>(ctx.points().size()),
          "max(|B - sum l w w^T|, |B w - l w|) in 113-bit arithmetic, r in [1e-3, 1e3]; double precision " +
              fmt("%.3g", worst_double)};
}

Measurement involution(Context& ctx, Rng&) {
  double worst = 0.0, worst_double = 0.0;
  for (std::size_t i = 0; i < ctx.points().size(); ++i) {
    worst = std::max(worst, ctx.extended_checks()[i].involution);
    worst_double = std::max(worst_double, cross_check_double(ctx.points()[i]).involution);
  }
  return {worst, 1e-9, Comparison::at_most, 0.0, static_cast<int>(ctx.points().size()),
          "max |(J B)^2 - I| in 113-bit arithmetic; double precision " + fmt("%.3g", worst_double)};
}

Measurement krein_null_gauge(Context& ctx, Rng& rng) {
  double worst = 0.0;
  for (const ConePoint& p : ctx.points()) {
    const EigenSystem sys = b_eigensystem(p);
    for (auto m : {EigenMode::gauge_inverse_square, EigenMode::gauge_square}) {
      const Vec4c phi = random_complex(rng) * sys[m].vector.cast<Complex>();
      const double density = std::abs(krein_form(phi, phi)) / (2.0 * p.r());
      worst = std::max(worst, density / (phi.squaredNorm() / (2.0 * p.r())));
    }
  }
  return {worst, 1e-12, Comparison::at_most, 0.0, 2 * static_cast<int>(ctx.points().size()),
          "max pointwise Krein density of g w_{r^-2}, g w_{r^2} relative to |phi|^2"};
}

Measurement transversal_eigenvalue_one(Context& ctx, Rng&) {
  double worst = 0.0;
  for (const auto& c : ctx.extended_checks()) worst = std::max(worst, c.transversal_defect);
  return {worst, 1e-12, Comparison::at_most, 0.0, static_cast<int>(ctx.points().size()),
          "max |B w1 - w1|, |J w1 - w1| in 113-bit arithmetic"};
}

// wavefunction

Measurement sesquilinearity(Context& ctx, Rng& rng) {
  const QuadratureGrid& g = ctx.grid;
  double worst = 0.0;
  for (int i = 0; i < ctx.n().product_states; ++i) {
    const MomentumWaveFunction phi = random_mixture(rng);
    const MomentumWaveFunction psi = random_mixture(rng);
    const MomentumWaveFunction chi = random_mixture(rng);
    const Complex a = random_complex(rng);
    const Complex b = random_complex(rng);
    const auto sp = sample(phi, g), ss = sample(psi, g), sc = sample(chi, g);
    const auto sl = sample(a * psi + b * chi, g);
    const double np = std::sqrt(hilbert_sum(g, sp, sp).real());
    const double ns = std::sqrt(hilbert_sum(g, ss, ss).real());
    const double nc = std::sqrt(hilbert_sum(g, sc, sc).real());
    const double scale = np * (std::abs(a) * ns + std::abs(b) * nc);
    for (auto form : {&hilbert_sum, &krein_sum}) {
      const Complex lin = form(g, sp, sl) - a * form(g, sp, ss) - b * form(g, sp, sc);
      const Complex sym = form(g, sp, ss) - std::conj(form(g, ss, sp));
      worst = std::max({worst, std::abs(lin) / scale, std::abs(sym) / (np * ns)});
    }
  }
  return {worst, 1e-10, Comparison::at_most, 0.0, ctx.n().product_states,
          "relative linearity and conjugate-symmetry defects of both products"};
}

Measurement hilbert_positivity(Context& ctx, Rng& rng) {
  const QuadratureGrid& g = ctx.grid;
  double worst = 0.0;
  double smallest = INFINITY;
  for (int i = 0; i < ctx.n().positivity_states; ++i) {
    const auto s = sample(random_mixture(rng), g);
    const Complex v = hilbert_sum(g, s, s);
    smallest = std::min(smallest, v.real());
    worst = std::max({worst, std::max(0.0, -v.real()) / std::abs(v), std::abs(v.imag()) / std::abs(v)});
  }
  return {worst, 1e-12, Comparison::at_most, 0.0, ctx.n().positivity_states,
          "max relative negative / imaginary part of (phi, phi); smallest norm " + fmt("%.3g", smallest)};
}

Measurement krein_hilbert_agreement(Context& ctx, Rng& rng) {
  double worst = 0.0, est = 0.0;
  for (int i = 0; i < ctx.n().product_states; ++i) {
    const SampledWaveFunction s(embed(random_pair(rng)), ctx.grid);
    const InnerProductReport k = krein_inner(s, s);
    const InnerProductReport h = hilbert_inner(s, s);
    est = std::max({est, k.estimated_error, h.estimated_error});
    worst = std::max(worst, allowance_ratio(std::abs(k.value - h.value), 2.0,
                                            k.estimated_error + h.estimated_error, std::abs(h.value)));
  }
  return {worst, 1.0, Comparison::at_most, est, ctx.n().product_states,
          "max |krein - hilbert| / (2 (err_K + err_H) + 1e-13 |hilbert|) on transversal states"};
}

// lopuszanski

RepElement random_element(Rng& rng, int i) {
  switch (i % 4) {
    case 2: return RepElement::conjugate_lorentz(random_lorentz(rng));
    case 3: return RepElement::translation(random_translation(rng));
    default: return RepElement::lorentz(random_lorentz(rng));
  }
}

Measurement krein_isometry(Context& ctx, Rng& rng) {
  double worst = 0.0, est = 0.0;
  int estimates_above = 0;
  for (int i = 0; i < ctx.n().isometry_pairs; ++i) {
    const RepElement g = random_element(rng, i);
    const MomentumWaveFunction phi = random_mixture(rng);
    const MomentumWaveFunction psi = i % 2 == 0 ? phi : random_mixture(rng);
    const IsometryReport r = verify_isometry(g, phi, psi, ctx.grid);
    est = std::max(est, r.estimated_error);
    if (r.estimated_error > 1e-6) ++estimates_above;
    const double scale = std::abs(r.hilbert_before.value) + std::abs(r.hilbert_after.value);
    worst = std::max(worst, allowance_ratio(r.krein_deviation(), 3.0, r.estimated_error, scale));
  }
  return {worst, 1.0, Comparison::at_most, est, ctx.n().isometry_pairs,
          "max |K(U phi, U psi) - K(phi, psi)| / (3 err + 1e-13 |H|) over Lorentz, conjugate and translation "
          "elements; " +
              fmt("%g estimates above 1e-6", estimates_above)};
}

Measurement group_law(Context& ctx, Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < ctx.n().group_triples; ++i) {
    const SL2C a = random_lorentz(rng);
    const SL2C b = random_lorentz(rng);
    const MomentumWaveFunction phi = random_mixture(rng);
    const auto pts = ctx.pointwise_points(rng);
    worst = std::max(worst, verify_representation_law(a, b, phi, pts));
    const Vec4 s = random_translation(rng);
    const Vec4 t = random_translation(rng);
    const MomentumWaveFunction lhs = translate(s, translate(t, phi));
    const MomentumWaveFunction rhs = translate(s + t, phi);
    for (const auto& p : pts) worst = std::max(worst, (lhs(p) - rhs(p)).norm());
  }
  return {worst, 1e-9, Comparison::at_most, 0.0, ctx.n().group_triples,
          "max pointwise |U(a)U(b) - U(ab)| and |T(s)T(t) - T(s+t)|"};
}

Measurement covariance(Context& ctx, Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < ctx.n().group_triples; ++i) {
    const SL2C a = random_lorentz(rng);
    const Vec4 shift = random_translation(rng);
    const MomentumWaveFunction phi = random_mixture(rng);
    worst = std::max(worst, verify_covariance(a, shift, phi, ctx.pointwise_points(rng)));
  }
  return {worst, 1e-9, Comparison::at_most, 0.0, ctx.n().group_triples,
          "max pointwise |U(a) T(s) U(a)^-1 - T(Lambda(a)^-1 s)|"};
}

Measurement unboundedness_witness(Context& ctx, Rng&) {
  const MomentumWaveFunction phi = parse_state("wr2:exp_ir");
  const RepElement g = RepElement::lorentz(SL2C::boost(Vec3::UnitZ(), 1.5));
  const IsometryReport r = verify_isometry(g, phi, phi, ctx.grid);
  const double ratio = r.hilbert_norm_ratio();
  return {std::abs(ratio - 1.0), 0.01, Comparison::greater_than, r.estimated_error, 1,
          "wr2:exp_ir under the z-boost chi = 1.5: Hilbert norm ratio " + fmt("%.6g", ratio) +
              fmt(", Krein %.3g -> %.3g", r.krein_before.value.real(), r.krein_after.value.real())};
}

// transversal

Measurement projector_idempotence(Context& ctx, Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < ctx.n().product_states; ++i) {
    const MomentumWaveFunction phi = random_mixture(rng);
    const MomentumWaveFunction once = embed(project_tr(phi));
    const MomentumWaveFunction twice = embed(project_tr(once));
    for (const auto& p : ctx.pointwise_points(rng)) worst = std::max(worst, (twice(p) - once(p)).norm());
  }
  return {worst, 1e-12, Comparison::at_most, 0.0, ctx.n().product_states, "max pointwise |P P phi - P phi|"};
}

Measurement lorentz_condition(Context& ctx, Rng& rng) {
  double worst = 0.0;
  std::size_t nodes = 0;
  for (int i = 0; i < ctx.n().product_states; ++i) {
    const auto s = sample(embed(random_pair(rng)), ctx.grid);
    for (std::size_t n = 0; n < s.size(); ++n) {
      const ConePoint& p = ctx.grid.nodes()[n];
      const Complex c = p.r() * s[n][0] - p[0] * s[n][1] - p[1] * s[n][2] - p[2] * s[n][3];
      worst = std::max(worst, std::abs(c));
    }
    nodes += s.size();
  }
  return {worst, 1e-12, Comparison::at_most, 0.0, ctx.n().product_states,
          "max |p^mu phi_mu| over " + std::to_string(nodes) + " node evaluations"};
}

Measurement positivity_norm_identity(Context& ctx, Rng& rng) {
  double worst = 0.0, est = 0.0, smallest = INFINITY;
  for (int i = 0; i < ctx.n().transversal_pairs; ++i) {
    const TransversalPair pair = random_pair(rng);
    const SampledWaveFunction s(embed(pair), ctx.grid);
    const InnerProductReport k = krein_inner(s, s);
    const InnerProductReport n = pair_norm_squared(pair, ctx.grid);
    est = std::max({est, k.estimated_error, n.estimated_error});
    smallest = std::min(smallest, k.value.real());
    worst = std::max({worst,
                      allowance_ratio(std::abs(k.value - n.value), 1.0, k.estimated_error + n.estimated_error,
                                      std::abs(n.value)),
                      allowance_ratio(std::max(0.0, -k.value.real()), 1.0, k.estimated_error, 0.0)});
  }
  return {worst, 1.0, Comparison::at_most, est, ctx.n().transversal_pairs,
          "max |K(phi_tr) - int |f+|^2 + |f-|^2| / (err_K + err_N + 1e-13 N); smallest norm " +
              fmt("%.3g", smallest)};
}

Measurement induced_unitarity(Context& ctx, Rng& rng) {
  double worst = 0.0, est = 0.0;
  for (int i = 0; i < ctx.n().transversal_pairs; ++i) {
    const SL2C a = random_lorentz(rng);
    const TransversalPair pair = random_pair(rng);
    const InnerProductReport before = pair_norm_squared(pair, ctx.grid);
    const InnerProductReport after = pair_norm_squared(induced_act(a, pair), ctx.grid);
    const double e = before.estimated_error + after.estimated_error;
    est = std::max(est, e);
    worst = std::max(worst, allowance_ratio(std::abs(after.value - before.value), 3.0, e, std::abs(before.value)));
  }
  return {worst, 1.0, Comparison::at_most, est, ctx.n().transversal_pairs,
          "max |N(U_tr pair) - N(pair)| / (3 err + 1e-13 N), rapidities <= 2"};
}

Measurement induced_group_law(Context& ctx, Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < ctx.n().group_triples; ++i) {
    const SL2C a = random_lorentz(rng);
    const SL2C b = random_lorentz(rng);
    const TransversalPair pair = random_pair(rng);
    const TransversalPair lhs = induced_act(a, induced_act(b, pair));
    const TransversalPair rhs = induced_act(a * b, pair);
    for (const auto& p : ctx.pointwise_points(rng)) {
      worst = std::max({worst, std::abs(lhs.f_plus(p) - rhs.f_plus(p)), std::abs(lhs.f_minus(p) - rhs.f_minus(p))});
    }
  }
  return {worst, 1e-9, Comparison::at_most, 0.0, ctx.n().group_triples,
          "max pointwise deviation of U_tr(a) U_tr(b) from U_tr(ab)"};
}

Measurement rotation_block_orthogonality(Context& ctx, Rng& rng) {
  double worst = 0.0;
  int used = 0, skipped = 0;
  for (int i = 0; i < ctx.n().theta_samples; ++i) {
    const SL2C a = random_lorentz(rng);
    const ConePoint p = random_cone_point(rng, 1e-2, 1e2);
    try {
      worst = std::max(worst, extract_theta(a, p).residual);
      ++used;
    } catch (const AxisZone&) {
      ++skipped;
    }
  }
  return {worst, 1e-10, Comparison::at_most, 0.0, used,
          "max |M^T M - I| of the Wigner block; " + fmt("%g samples in the axis zone skipped", skipped)};
}

// schwartz

Measurement restriction_linearity(Context& ctx, Rng& rng) {
  const std::vector<std::string> names = library_test_function_names();
  std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
  double worst = 0.0;
  for (int i = 0; i < ctx.n().product_states; ++i) {
    const TestFunction f = library_test_function(names[pick(rng)]);
    const TestFunction g = library_test_function(names[pick(rng)]);
    const Complex a = random_complex(rng);
    const Complex b = random_complex(rng);
    const TestFunction lhs = restrict_to_cone(f.scaled(a) + g.scaled(b));
    const TestFunction rf = restrict_to_cone(f);
    const TestFunction rg = restrict_to_cone(g);
    for (const auto& p : ctx.pointwise_points(rng)) {
      const EuclideanPoint x = p.spatial();
      worst = std::max(worst, (lhs(x) - (a * rf(x) + b * rg(x))).norm());
    }
  }
  return {worst, 0.0, Comparison::at_most, 0.0, ctx.n().product_states,
          "max |R(af + bg) - a R f - b R g|, exact equality required"};
}

Measurement fourier_linearity(Context& ctx, Rng& rng) {
  const MomentumWaveFunction phi = cone_wavefunction(vector_test_function("s0_gauss", Vec4c(1.0, 0.0, 0.5, 0.0)));
  const MomentumWaveFunction psi = cone_wavefunction(vector_test_function("s0_shell", Vec4c(0.0, 1.0, 0.0, 0.3)));
  double worst = 0.0;
  const int points = 3;
  for (int i = 0; i < points; ++i) {
    const Complex a = random_complex(rng);
    const Complex b = random_complex(rng);
    const Vec4 x = random_translation(rng);
    const Vec4c fp = fourier_to_position(phi, ctx.grid, x).value;
    const Vec4c fs = fourier_to_position(psi, ctx.grid, x).value;
    const Vec4c fl = fourier_to_position(a * phi + b * psi, ctx.grid, x).value;
    const double scale = std::abs(a) * fp.norm() + std::abs(b) * fs.norm();
    worst = std::max(worst, (fl - a * fp - b * fs).norm() / scale);
  }
  return {worst, 1e-12, Comparison::at_most, 0.0, points,
          "max relative |F(a phi + b psi) - a F phi - b F psi| at random x"};
}

Measurement library_membership(Context&, Rng&) {
  int mismatches = 0, checked = 0;
  std::string detail;
  for (const auto& name : library_test_function_names()) {
    const TestFunction f = library_test_function(name);
    const bool expected = library_is_s0(name);
    for (const TestFunction& g : {f, restrict_to_cone(f)}) {
      ++checked;
      bool member = false;
      std::string note;
      try {
        const MembershipReport r = s0_membership(g, 4, 1e-8);
        member = r.is_member;
        note = fmt("%.3g", r.max_violation);
      } catch (const Error& e) {
        note = e.what();
      }
      if (member != expected) ++mismatches;
      if (!detail.empty()) detail += "; ";
      detail += name + (g.dimension() == 3 ? "|cone " : " ") + (member ? "member " : "non-member ") + note;
    }
  }
  return {static_cast<double>(mismatches), 0.0, Comparison::at_most, 0.0, checked,
          "misclassified library profiles at K = 4, tol = 1e-8: " + detail};
}

// fock

struct FockFixture {
  std::shared_ptr<const ModeBasis> basis;
  std::unique_ptr<FockSector> sector;
  FockOperator eta;
};

FockFixture fock_fixture(Context& ctx, std::vector<MomentumWaveFunction> states) {
  FockFixture f;
  f.basis = std::make_shared<const ModeBasis>(build_mode_basis(states, ctx.grid));
  f.sector = std::make_unique<FockSector>(f.basis, ctx.n().fock_cutoff);
  f.eta = gupta_bleuler_eta(*f.sector);
  return f;
}

Measurement eta_involution(Context& ctx, Rng& rng) {
  const FockFixture f = fock_fixture(ctx, {random_mixture(rng), random_mixture(rng)});
  const auto d = static_cast<Eigen::Index>(f.sector->dimension());
  const ComplexMatrix& eta = f.eta.matrix;
  const double inv = max_abs(eta * eta - ComplexMatrix::Identity(d, d));
  const double adj = max_abs(eta - eta.adjoint());
  return {std::max(inv, adj), 1e-7, Comparison::at_most, 0.0, 1,
          fmt("|eta^2 - I| = %.3g, |eta - eta^dagger| = %.3g", inv, adj) +
              fmt(" on %g modes, Fock dimension %g", static_cast<double>(f.basis->size()), static_cast<double>(d))};
}

Measurement ccr_below_ceiling(Context& ctx, Rng& rng) {
  const FockFixture f = fock_fixture(ctx, {random_mixture(rng), random_mixture(rng)});
  const FockSector& s = *f.sector;
  double worst = 0.0;
  for (std::size_t i = 0; i < s.modes(); ++i) {
    for (std::size_t j = 0; j < s.modes(); ++j) {
      const ComplexMatrix a = s.annihilation(i).matrix;
      const ComplexMatrix c = s.creation(j).matrix;
      const ComplexMatrix comm = a * c - c * a;
      for (std::size_t col = 0; col < s.dimension(); ++col) {
        if (s.total(col) > s.cutoff() - 1) continue;
        for (std::size_t row = 0; row < s.dimension(); ++row) {
          const Complex expected = (i == j && row == col) ? 1.0 : 0.0;
          worst = std::max(worst, std::abs(comm(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) -
                                           expected));
        }
      }
    }
  }
  return {worst, 1e-12, Comparison::at_most, 0.0, static_cast<int>(s.modes() * s.modes()),
          "max |[a_i, a_j^+] - delta_ij| on occupations <= N - 1"};
}

std::pair<TestFunction, TestFunction> field_pair(Rng& rng) {
  const TestFunction f =
      vector_test_function("s0_gauss", Vec4c(1.0, 0.0, 0.0, 0.5)).translated(random_translation(rng, 0.6));
  const TestFunction g =
      vector_test_function("s0_shell", Vec4c(0.0, 0.3, 0.0, 1.0)).translated(random_translation(rng, 0.6));
  return {f, g};
}

Measurement commutator_antisymmetry(Context& ctx, Rng& rng) {
  const auto [f, g] = field_pair(rng);
  const FockFixture fx = fock_fixture(ctx, {cone_wavefunction(f), cone_wavefunction(g)});
  const CommutatorCheck fg = commutator_check(f, g, *fx.sector, fx.eta);
  const CommutatorCheck gf = commutator_check(g, f, *fx.sector, fx.eta);
  return {std::abs(fg.cnumber + gf.cnumber), 1e-10, Comparison::at_most, 0.0, 1,
          fmt("[A(f), A(g)] vacuum value %.6g%+.6gi", fg.cnumber.real(), fg.cnumber.imag())};
}

Measurement physical_positivity(Context& ctx, Rng& rng) {
  const TestFunction f = transversal_test_function("s0_gauss", true);
  const TestFunction g = transversal_test_function("s0_shell", false);
  const FockFixture fx = fock_fixture(ctx, {cone_wavefunction(f), cone_wavefunction(g)});
  const FockSector& s = *fx.sector;
  const ComplexMatrix af = field_operator(f, s, fx.eta).op.matrix;
  const ComplexMatrix ag = field_operator(g, s, fx.eta).op.matrix;
  double smallest = INFINITY;
  for (int trial = 0; trial < ctx.n().fock_states; ++trial) {
    ComplexVector psi = random_complex(rng) * s.vacuum();
    ComplexVector layer = s.vacuum();
    for (int degree = 1; degree <= s.cutoff(); ++degree) {
      const Complex cf = random_complex(rng);
      const Complex cg = random_complex(rng);
      layer = (cf * af + cg * ag) * layer;
      psi += layer;
    }
    smallest = std::min(smallest, krein_expectation(fx.eta, psi));
  }
  return {std::max(0.0, -smallest), 1e-8, Comparison::at_most, 0.0, ctx.n().fock_states,
          "max(0, -<Psi|eta Psi>/<Psi|Psi>) over states generated by transversal A; smallest " +
              fmt("%.3g", smallest)};
}

// --- registry ------------------------------------------------------------------

struct CheckSpec {
  const char* id;
  CheckFn fn;
};

struct SuiteSpec {
  const char* name;
  std::vector<CheckSpec> checks;
};

const std::vector<SuiteSpec>& registry() {
  static const std::vector<SuiteSpec> suites = {
      {"eigensystem",
       {{"geometry.antihomomorphism", antihomomorphism},
        {"geometry.metric_preservation", metric_preservation},
        {"geometry.cone_closure", cone_closure},
        {"geometry.quadrature_convergence", quadrature_convergence},
        {"krein_core.spectral_reconstruction", spectral_reconstruction},
        {"krein_core.involution", involution},
        {"krein_core.krein_null_gauge", krein_null_gauge},
        {"krein_core.transversal_eigenvalue_one", transversal_eigenvalue_one}}},
      {"isometry",
       {{"wavefunction.sesquilinearity", sesquilinearity},
        {"wavefunction.hilbert_positivity", hilbert_positivity},
        {"wavefunction.krein_hilbert_agreement_tr", krein_hilbert_agreement},
        {"lopuszanski.krein_isometry", krein_isometry},
        {"lopuszanski.group_law", group_law},
        {"lopuszanski.covariance", covariance},
        {"lopuszanski.unboundedness_witness", unboundedness_witness}}},
      {"transversal",
       {{"transversal.projector_idempotence", projector_idempotence},
        {"transversal.lorentz_condition", lorentz_condition},
        {"transversal.positivity_norm_identity", positivity_norm_identity},
        {"transversal.induced_unitarity", induced_unitarity},
        {"transversal.induced_group_law", induced_group_law}}},
      {"theta", {{"transversal.rotation_block_orthogonality", rotation_block_orthogonality}}},
      {"schwartz",
       {{"schwartz.restriction_linearity", restriction_linearity},
        {"schwartz.fourier_linearity", fourier_linearity},
        {"schwartz.library_membership", library_membership}}},
      {"fock",
       {{"fock.eta_involution", eta_involution},
        {"fock.ccr_below_ceiling", ccr_below_ceiling},
        {"fock.commutator_antisymmetry", commutator_antisymmetry},
        {"fock.physical_positivity", physical_positivity}}},
  };
  return suites;
}

const SuiteSpec& find_suite(std::string_view name) {
  for (const auto& s : registry()) {
    if (name == s.name) return s;
  }
  throw ConfigError("unknown suite '" + std::string(name) + "'");
}

bool check_passes(double measured, double tolerance, Comparison c) {
  if (std::isnan(measured)) return false;
  return c == Comparison::at_most ? measured <= tolerance : measured > tolerance;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string short_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

const char* comparison_symbol(Comparison c) { return c == Comparison::at_most ? "<=" : ">"; }

}  // namespace

// --- SuiteConfig -------------------------------------------------------------

SuiteConfig SuiteConfig::from_json(const json& j) {
  reject_unknown(j, {"grid", "seed", "tolerances", "suites", "out_dir", "samples", "threads"}, "config");
  SuiteConfig c;
  if (j.contains("grid")) c.grid = grid_from_json(j["grid"]);
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j["seed"], "seed");
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) throw ConfigError("tolerances must be an object");
    for (const auto& [key, value] : j["tolerances"].items()) {
      const double t = get_as<double>(value, "tolerances." + key);
      if (!(t >= 0.0)) throw ConfigError("tolerance for '" + key + "' must be non-negative");
      c.tolerances[key] = t;
    }
  }
  if (j.contains("suites")) c.suites = get_as<std::vector<std::string>>(j["suites"], "suites");
  if (j.contains("out_dir")) c.out_dir = get_as<std::string>(j["out_dir"], "out_dir");
  if (j.contains("samples")) c.samples = samples_from_json(j["samples"]);
  if (j.contains("threads")) c.threads = get_as<unsigned>(j["threads"], "threads");
  c.selected_suites();
  return c;
}

SuiteConfig SuiteConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path.string() + "': " + e.what());
  }
  return from_json(j);
}

json SuiteConfig::to_json() const {
  json j{{"grid", grid_to_json(grid)},
         {"seed", seed},
         {"tolerances", tolerances},
         {"suites", selected_suites()},
         {"out_dir", out_dir.string()},
         {"samples", samples_to_json(samples)},
         {"threads", threads}};
  return j;
}

std::vector<std::string> SuiteConfig::selected_suites() const {
  if (suites.empty()) return suite_names();
  for (const auto& s : suites) find_suite(s);
  return suites;
}

double SuiteConfig::tolerance(const std::string& check_id, double fallback) const {
  if (auto it = tolerances.find(check_id); it != tolerances.end()) return it->second;
  const std::string module = check_id.substr(0, check_id.find('.'));
  if (auto it = tolerances.find(module); it != tolerances.end()) return it->second;
  for (const auto& s : registry()) {
    for (const auto& c : s.checks) {
      if (check_id == c.id) {
        if (auto it = tolerances.find(s.name); it != tolerances.end()) return it->second;
      }
    }
  }
  return fallback;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : registry()) out.emplace_back(s.name);
    return out;
  }();
  return names;
}

const std::vector<std::string>& suite_check_ids(std::string_view suite) {
  static const std::map<std::string, std::vector<std::string>> ids = [] {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& s : registry()) {
      for (const auto& c : s.checks) out[s.name].emplace_back(c.id);
    }
    return out;
  }();
  find_suite(suite);
  return ids.at(std::string(suite));
}

// --- running -----------------------------------------------------------------

bool VerificationReport::passed() const { return failures() == 0; }

int VerificationReport::failures() const {
  int n = 0;
  for (const auto& s : suites) {
    for (const auto& c : s.checks) n += c.passed ? 0 : 1;
  }
  return n;
}

VerificationReport run_suite(const SuiteConfig& config) {
  const std::vector<std::string> selected = config.selected_suites();
  for (const auto& [key, value] : config.tolerances) {
    bool known = std::find(suite_names().begin(), suite_names().end(), key) != suite_names().end();
    for (const auto& s : registry()) {
      for (const auto& c : s.checks) {
        const std::string id = c.id;
        known = known || key == id || key == id.substr(0, id.find('.'));
      }
    }
    if (!known) throw ConfigError("tolerance override for unknown check '" + key + "'");
  }
  if (config.threads > 0) set_worker_threads(config.threads);

  const QuadratureGrid grid(config.grid);
  Context ctx{config, grid, std::nullopt, std::nullopt};
  VerificationReport report{config, {}};
  for (const auto& name : selected) {
    const SuiteSpec& spec = find_suite(name);
    SuiteReport suite{name, {}, 0.0};
    const auto suite_start = std::chrono::steady_clock::now();
    for (const auto& check : spec.checks) {
      const auto start = std::chrono::steady_clock::now();
      Rng rng = ctx.rng(check.id);
      CheckResult r;
      r.id = check.id;
      try {
        const Measurement m = check.fn(ctx, rng);
        r.measured = m.measured;
        r.tolerance = config.tolerance(check.id, m.tolerance);
        r.comparison = m.comparison;
        r.estimated_error = m.estimated_error;
        r.samples = m.samples;
        r.detail = m.detail;
        r.passed = check_passes(r.measured, r.tolerance, r.comparison);
      } catch (const Error& e) {
        r.measured = NAN;
        r.tolerance = config.tolerance(check.id, 0.0);
        r.passed = false;
        r.detail = std::string("error: ") + e.what();
      }
      r.runtime_ms = elapsed_ms(start);
      suite.checks.push_back(std::move(r));
    }
    suite.runtime_ms = elapsed_ms(suite_start);
    report.suites.push_back(std::move(suite));
  }
  return report;
}

// --- reporting -----------------------------------------------------------------

json environment_fingerprint() {
  return {{"library", std::string("kreinphoton ") + KREINPHOTON_VERSION},
#if defined(__clang__)
          {"compiler", std::string("clang ") + __clang_version__},
#elif defined(__GNUC__)
          {"compiler", std::string("gcc ") + __VERSION__},
#else
          {"compiler", "unknown"},
#endif
          {"cxx_standard", static_cast<long>(__cplusplus)},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)}};
}

json report_body(const VerificationReport& report) {
  json config = report.config.to_json();
  config.erase("out_dir");
  config.erase("threads");
  json body{{"config", config},
            {"grid_id", report.config.grid.id()},
            {"environment", environment_fingerprint()},
            {"passed", report.passed()},
            {"failures", report.failures()}};
  json suites = json::array();
  for (const auto& s : report.suites) {
    json checks = json::array();
    bool suite_passed = true;
    for (const auto& c : s.checks) {
      suite_passed = suite_passed && c.passed;
      checks.push_back({{"id", c.id},
                        {"status", c.passed ? "pass" : "fail"},
                        {"measured", std::isfinite(c.measured) ? json(c.measured) : json(nullptr)},
                        {"comparison", comparison_symbol(c.comparison)},
                        {"tolerance", c.tolerance},
                        {"estimated_error", c.estimated_error},
                        {"samples", c.samples},
                        {"detail", c.detail}});
    }
    suites.push_back({{"name", s.name}, {"passed", suite_passed}, {"checks", checks}});
  }
  body["suites"] = suites;
  return body;
}

json report_json(const VerificationReport& report) {
  json timing{{"suites", json::object()}, {"checks", json::object()}};
  double total = 0.0;
  for (const auto& s : report.suites) {
    timing["suites"][s.name] = s.runtime_ms;
    total += s.runtime_ms;
    for (const auto& c : s.checks) timing["checks"][c.id] = c.runtime_ms;
  }
  timing["total_ms"] = total;
  return {{"schema", "kreinphoton.verification"},
          {"schema_version", VerificationReport::kSchemaVersion},
          {"body", report_body(report)},
          {"timing", timing}};
}

ReportFormat parse_format(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  if (name == "markdown" || name == "md") return ReportFormat::markdown;
  throw ConfigError("unknown report format '" + std::string(name) + "'");
}

std::string extension(ReportFormat format) {
  switch (format) {
    case ReportFormat::json: return "json";
    case ReportFormat::csv: return "csv";
    case ReportFormat::markdown: return "md";
  }
  return "txt";
}

std::string format_report(const VerificationReport& report, ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::json:
      out << report_json(report).dump(2) << '\n';
      break;
    case ReportFormat::csv:
      out << "suite,check,status,measured,comparison,tolerance,estimated_error,samples,runtime_ms,detail\n";
      for (const auto& s : report.suites) {
        for (const auto& c : s.checks) {
          out << s.name << ',' << c.id << ',' << (c.passed ? "pass" : "fail") << ',' << g17(c.measured) << ','
              << comparison_symbol(c.comparison) << ',' << g17(c.tolerance) << ',' << g17(c.estimated_error) << ','
              << c.samples << ',' << g17(c.runtime_ms) << ',' << csv_quote(c.detail) << '\n';
        }
      }
      break;
    case ReportFormat::markdown:
      out << "# Verification report\n\n"
          << "grid `" << report.config.grid.id() << "`, seed " << report.config.seed << ", "
          << (report.passed() ? "all checks pass" : std::to_string(report.failures()) + " failing checks") << "\n";
      for (const auto& s : report.suites) {
        out << "\n## " << s.name << "\n\n"
            << "| check | status | measured | tolerance | est. error | samples | ms |\n"
            << "|---|---|---|---|---|---|---|\n";
        for (const auto& c : s.checks) {
          out << "| " << c.id << " | " << (c.passed ? "pass" : "**fail**") << " | " << short_number(c.measured)
              << " | " << comparison_symbol(c.comparison) << ' ' << short_number(c.tolerance) << " | "
              << short_number(c.estimated_error) << " | " << c.samples << " | "
              << static_cast<long long>(std::llround(c.runtime_ms)) << " |\n";
        }
      }
      break;
  }
  return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IOError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw IOError("write to '" + path.string() + "' failed");
}

std::filesystem::path emit_report(const VerificationReport& report, ReportFormat format,
                                  const std::filesystem::path& out_dir, const std::string& stem) {
  const std::filesystem::path path = out_dir / (stem + "." + extension(format));
  write_text_file(path, format_report(report, format));
  return path;
}

}  // namespace kreinphoton
