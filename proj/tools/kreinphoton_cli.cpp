#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kreinphoton/errors.hpp"
#include "kreinphoton/fock_gb.hpp"
#include "kreinphoton/krein_core.hpp"
#include "kreinphoton/lopuszanski.hpp"
#include "kreinphoton/profiles.hpp"
#include "kreinphoton/random_states.hpp"
#include "kreinphoton/schwartz_fourier.hpp"
#include "kreinphoton/transversal.hpp"
#include "kreinphoton/verification.hpp"

using namespace kreinphoton;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format;
  std::optional<unsigned> threads;
};

struct Session {
  SuiteConfig config;
  bool write_files = false;
  std::optional<ReportFormat> format;
};

Session open_session(const GlobalOptions& g) {
  Session s;
  if (!g.config_path.empty()) {
    s.config = SuiteConfig::load(g.config_path);
    s.write_files = s.config.out_dir != std::filesystem::path(".");
  }
  if (g.seed) s.config.seed = *g.seed;
  if (g.threads) s.config.threads = *g.threads;
  if (!g.out_dir.empty()) {
    s.config.out_dir = g.out_dir;
    s.write_files = true;
  }
  if (!g.format.empty()) s.format = parse_format(g.format);
  return s;
}

std::vector<double> parse_numbers(const std::string& text, std::size_t expected, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(what + ": '" + item + "' is not a number");
    }
  }
  if (out.size() != expected) {
    throw ConfigError(what + " needs " + std::to_string(expected) + " comma-separated numbers");
  }
  return out;
}

Vec3 parse_axis(const std::string& text) {
  if (text == "x") return Vec3::UnitX();
  if (text == "y") return Vec3::UnitY();
  if (text == "z") return Vec3::UnitZ();
  const auto v = parse_numbers(text, 3, "axis");
  const Vec3 axis(v[0], v[1], v[2]);
  if (!(axis.norm() > 0.0)) throw ConfigError("axis must be non-zero");
  return axis;
}

// "boost:z:1.2*rotation:0,1,1:0.5"
SL2C parse_alpha(const std::string& text) {
  SL2C alpha = SL2C::identity();
  std::stringstream ss(text);
  std::string factor;
  while (std::getline(ss, factor, '*')) {
    const auto first = factor.find(':');
    const auto last = factor.rfind(':');
    if (first == std::string::npos || first == last) {
      throw ConfigError("Lorentz factor '" + factor + "' must be boost:<axis>:<rapidity> or rotation:<axis>:<angle>");
    }
    const std::string kind = factor.substr(0, first);
    const Vec3 axis = parse_axis(factor.substr(first + 1, last - first - 1));
    const double value = parse_numbers(factor.substr(last + 1), 1, "Lorentz parameter")[0];
    if (kind == "boost") {
      alpha = alpha * SL2C::boost(axis, value);
    } else if (kind == "rotation") {
      alpha = alpha * SL2C::rotation(axis, value);
    } else {
      throw ConfigError("unknown Lorentz factor kind '" + kind + "'");
    }
  }
  return alpha;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

json inner_json(const InnerProductReport& r) {
  return {{"value", complex_json(r.value)}, {"grid_id", r.grid_id}, {"estimated_error", r.estimated_error}};
}

// flat record output for single-shot subcommands
std::string format_record(const json& record, ReportFormat format) {
  const json flat = record.flatten();
  switch (format) {
    case ReportFormat::json: return record.dump(2) + "\n";
    case ReportFormat::csv: {
      std::string out = "key,value\n";
      for (const auto& [k, v] : flat.items()) out += k + "," + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
      return out;
    }
    case ReportFormat::markdown: {
      std::string out = "| key | value |\n|---|---|\n";
      for (const auto& [k, v] : flat.items()) out += "| " + k + " | " + (v.is_string() ? v.get<std::string>() : v.dump()) + " |\n";
      return out;
    }
  }
  return {};
}

void deliver(const Session& s, const std::string& text, const std::string& stem, const std::string& ext) {
  std::cout << text;
  if (s.write_files) {
    const auto path = s.config.out_dir / (stem + "." + ext);
    write_text_file(path, text);
    std::cerr << "wrote " << path.string() << "\n";
  }
}

int emit_suite(const Session& s, const VerificationReport& report, const std::string& stem) {
  const ReportFormat format = s.format.value_or(ReportFormat::json);
  deliver(s, format_report(report, format), stem, extension(format));
  std::cerr << (report.passed() ? "all checks pass" : std::to_string(report.failures()) + " check(s) failed") << "\n";
  return report.exit_code();
}

int emit_record(const Session& s, const json& record, const std::string& stem, bool passed) {
  const ReportFormat format = s.format.value_or(ReportFormat::json);
  deliver(s, format_record(record, format), stem, extension(format));
  return passed ? kExitPass : kExitFail;
}

int run_suites(Session s, std::vector<std::string> suites, const std::string& stem) {
  if (!suites.empty()) s.config.suites = std::move(suites);
  return emit_suite(s, run_suite(s.config), stem);
}

GridConfig load_grid(const std::string& path, const GridConfig& fallback) {
  if (path.empty()) return fallback;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read grid file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("grid file '" + path + "': " + e.what());
  }
  if (!j.contains("grid")) j = json{{"grid", j}};
  return SuiteConfig::from_json(json{{"grid", j["grid"]}}).grid;
}

struct IsometryOptions {
  std::string state;
  std::string partner;
  double rapidity = 0.0;
  std::string axis = "z";
  double rotation = 0.0;
  std::string rotation_axis = "z";
  bool conjugate = false;
  std::string grid_path;
};

int verify_isometry_cmd(const Session& s, const IsometryOptions& o) {
  if (o.state.empty()) return run_suites(s, {"isometry"}, "verify-isometry");
  const MomentumWaveFunction phi = parse_state(o.state);
  const MomentumWaveFunction psi = o.partner.empty() ? phi : parse_state(o.partner);
  const SL2C alpha = SL2C::rotation(parse_axis(o.rotation_axis), o.rotation) * SL2C::boost(parse_axis(o.axis), o.rapidity);
  const RepElement g = o.conjugate ? RepElement::conjugate_lorentz(alpha) : RepElement::lorentz(alpha);
  const QuadratureGrid grid(load_grid(o.grid_path, s.config.grid));
  const IsometryReport r = verify_isometry(g, phi, psi, grid);
  const double scale = std::abs(r.hilbert_before.value) + std::abs(r.hilbert_after.value);
  const double allowance = 3.0 * r.estimated_error + 1e-13 * scale;
  const bool passed = r.krein_deviation() <= allowance;
  json record{{"element", g.describe()},
              {"state", phi.description()},
              {"partner", psi.description()},
              {"grid_id", grid.id()},
              {"krein_before", inner_json(r.krein_before)},
              {"krein_after", inner_json(r.krein_after)},
              {"hilbert_before", inner_json(r.hilbert_before)},
              {"hilbert_after", inner_json(r.hilbert_after)},
              {"estimated_error", r.estimated_error},
              {"krein_deviation", r.krein_deviation()},
              {"allowance", allowance},
              {"hilbert_norm_ratio", r.hilbert_norm_ratio()},
              {"passed", passed}};
  return emit_record(s, record, "verify-isometry", passed);
}

int extract_theta_cmd(const Session& s, const std::string& alpha_spec, int samples, double r_min, double r_max) {
  if (samples < 1) throw ConfigError("--samples must be positive");
  if (!(r_min > 0.0) || !(r_max > r_min)) throw ConfigError("need 0 < r-min < r-max");
  const SL2C alpha = parse_alpha(alpha_spec);
  Rng rng = make_rng(s.config.seed, "extract-theta");
  const ReportFormat format = s.format.value_or(ReportFormat::csv);
  std::ostringstream csv;
  json rows = json::array();
  csv << "p1,p2,p3,theta,residual\n";
  double worst = 0.0;
  int skipped = 0;
  for (int i = 0; i < samples; ++i) {
    const ConePoint p = random_cone_point(rng, r_min, r_max);
    try {
      const ThetaSample t = extract_theta(alpha, p);
      worst = std::max(worst, t.residual);
      csv << g17(p[0]) << ',' << g17(p[1]) << ',' << g17(p[2]) << ',' << g17(t.theta) << ',' << g17(t.residual) << '\n';
      rows.push_back({{"p", {p[0], p[1], p[2]}}, {"theta", t.theta}, {"residual", t.residual}});
    } catch (const AxisZone&) {
      ++skipped;
    }
  }
  const bool passed = worst < 1e-10;
  if (format == ReportFormat::csv) {
    deliver(s, csv.str(), "extract-theta", "csv");
  } else {
    const json record{{"alpha", alpha_spec}, {"samples", rows}, {"max_residual", worst}, {"axis_zone_skipped", skipped}};
    deliver(s, format == ReportFormat::json ? record.dump(2) + "\n" : format_record(record, format), "extract-theta",
            extension(format));
  }
  std::cerr << "max residual " << worst << ", " << skipped << " axis-zone samples skipped\n";
  return passed ? kExitPass : kExitFail;
}

int check_s0_cmd(const Session& s, const std::string& profile, int order, double tol, bool cone) {
  const TestFunction base = library_test_function(profile);
  const TestFunction f = cone ? restrict_to_cone(base) : base;
  const MembershipReport r = s0_membership(f, order, tol);
  const json record{{"profile", profile},
                    {"restricted_to_cone", cone},
                    {"dimension", f.dimension()},
                    {"order_checked", r.order_checked},
                    {"tolerance", r.tolerance},
                    {"is_member", r.is_member},
                    {"max_violation", r.max_violation},
                    {"final_step", r.final_step},
                    {"library_member", library_is_s0(profile)}};
  return emit_record(s, record, "check-s0", r.is_member);
}

int fourier_cmd(const Session& s, const std::string& profile, const std::string& x_text, const std::string& pol_text,
                bool strict) {
  const auto xs = parse_numbers(x_text, 4, "--x");
  const Vec4 x(xs[0], xs[1], xs[2], xs[3]);
  MomentumWaveFunction phi;
  if (profile.find(':') != std::string::npos) {
    phi = parse_state(profile);
  } else {
    const auto p = parse_numbers(pol_text, 4, "--polarization");
    phi = cone_wavefunction(vector_test_function(profile, Vec4c(p[0], p[1], p[2], p[3])));
  }
  const QuadratureGrid grid(s.config.grid);
  const FourierReport r = fourier_to_position(phi, grid, x, strict);
  json value = json::array();
  for (int i = 0; i < 4; ++i) value.push_back(complex_json(r.value[i]));
  const json record{{"profile", profile},
                    {"x", {x[0], x[1], x[2], x[3]}},
                    {"value", value},
                    {"grid_id", r.grid_id},
                    {"estimated_error", r.estimated_error},
                    {"oscillation_warning", r.oscillation_warning}};
  return emit_record(s, record, "fourier", true);
}

void write_matrix_csv(const Session& s, const ComplexMatrix& m, const std::string& stem) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << (j ? "," : "") << g17(m(i, j).real()) << ',' << g17(m(i, j).imag());
    }
    out << '\n';
  }
  const auto path = s.config.out_dir / (stem + ".csv");
  write_text_file(path, out.str());
  std::cerr << "wrote " << path.string() << "\n";
}

int verify_fock_cmd(const Session& s, const std::vector<std::string>& mode_specs, int cutoff, bool dump) {
  if (mode_specs.empty()) return run_suites(s, {"fock"}, "verify-fock");
  if (cutoff < 1) throw ConfigError("--cutoff must be at least 1");
  std::vector<MomentumWaveFunction> states;
  for (const auto& m : mode_specs) states.push_back(parse_state(m));
  const QuadratureGrid grid(s.config.grid);
  const auto basis = std::make_shared<const ModeBasis>(build_mode_basis(states, grid));
  const FockSector sector(basis, cutoff);
  const FockOperator eta = gupta_bleuler_eta(sector);
  const auto d = static_cast<Eigen::Index>(sector.dimension());
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);

  double covariance = 0.0;
  double ccr = 0.0;
  for (std::size_t i = 0; i < sector.modes(); ++i) {
    ComplexVector e = ComplexVector::Zero(static_cast<Eigen::Index>(sector.modes()));
    e[static_cast<Eigen::Index>(i)] = 1.0;
    covariance = std::max(covariance, max_abs(eta.matrix * sector.creation(e).matrix * eta.matrix -
                                              sector.creation(sector.j_matrix() * e).matrix));
    for (std::size_t j = 0; j < sector.modes(); ++j) {
      const ComplexMatrix a = sector.annihilation(i).matrix;
      const ComplexMatrix c = sector.creation(j).matrix;
      const ComplexMatrix comm = a * c - c * a;
      for (Eigen::Index col = 0; col < d; ++col) {
        if (sector.total(static_cast<std::size_t>(col)) > cutoff - 1) continue;
        for (Eigen::Index row = 0; row < d; ++row) {
          const double expected = (i == j && row == col) ? 1.0 : 0.0;
          ccr = std::max(ccr, std::abs(comm(row, col) - expected));
        }
      }
    }
  }
  const double involution = max_abs(eta.matrix * eta.matrix - id);
  const double adjoint = max_abs(eta.matrix - eta.matrix.adjoint());
  const bool passed = involution < 1e-7 && adjoint < 1e-7 && covariance < 1e-7 && ccr < 1e-12;
  const json record{{"modes", mode_specs},
                    {"grid_id", grid.id()},
                    {"basis_size", basis->size()},
                    {"cutoff", cutoff},
                    {"fock_dimension", sector.dimension()},
                    {"input_gram_condition", basis->input_condition},
                    {"gram_residual", basis->gram_residual},
                    {"j_involution_residual", basis->j_involution_residual()},
                    {"j_hermiticity_residual", basis->j_hermiticity_residual()},
                    {"eta_involution", involution},
                    {"eta_self_adjoint", adjoint},
                    {"eta_creation_covariance", covariance},
                    {"ccr_below_ceiling", ccr},
                    {"passed", passed}};
  if (dump) {
    write_matrix_csv(s, basis->j_matrix, "fock-j");
    write_matrix_csv(s, eta.matrix, "fock-eta");
    for (std::size_t i = 0; i < sector.modes(); ++i) {
      write_matrix_csv(s, sector.creation(i).matrix, "fock-creation-" + std::to_string(i));
    }
  }
  return emit_record(s, record, "verify-fock", passed);
}

std::string matrix_json(const Mat4& m) {
  std::string out = "[";
  for (int i = 0; i < 4; ++i) {
    out += i ? ", [" : "[";
    for (int j = 0; j < 4; ++j) out += (j ? ", " : "") + g17(m(i, j));
    out += "]";
  }
  return out + "]";
}

std::string vector_json(const Vec4& v) {
  std::string out = "[";
  for (int i = 0; i < 4; ++i) out += (i ? ", " : "") + g17(v[i]);
  return out + "]";
}

int dump_matrix_cmd(const Session& s, const std::string& p_text) {
  const auto v = parse_numbers(p_text, 3, "--p");
  const ConePoint p(Vec3(v[0], v[1], v[2]));
  const WeightMatrix b = b_matrix(p);
  const EigenSystem sys = b_eigensystem(p);
  const FundamentalSymmetry jp = fundamental_symmetry(p);
  static const char* names[] = {"transverse_plus", "transverse_minus", "gauge_inverse_square", "gauge_square"};
  std::string out = "{\n  \"p\": [" + g17(p[0]) + ", " + g17(p[1]) + ", " + g17(p[2]) + "],\n";
  out += "  \"r\": " + g17(p.r()) + ",\n";
  out += "  \"B\": " + matrix_json(b.entries) + ",\n";
  out += "  \"eigensystem\": [\n";
  for (int i = 0; i < 4; ++i) {
    out += std::string("    {\"mode\": \"") + names[i] + "\", \"eigenvalue\": " + g17(sys[i].eigenvalue) +
           ", \"vector\": " + vector_json(sys[i].vector) + "}" + (i < 3 ? ",\n" : "\n");
  }
  out += "  ],\n";
  out += std::string("  \"axis_convention\": ") + (sys.axis_convention ? "true" : "false") + ",\n";
  out += "  \"J_prime\": " + matrix_json(jp.entries) + "\n}\n";
  deliver(s, out, "matrix", "json");
  return kExitPass;
}

int dump_grid_cmd(const Session& s, const std::string& grid_path) {
  const QuadratureGrid grid(load_grid(grid_path, s.config.grid));
  std::ostringstream out;
  grid.write_csv(out);
  deliver(s, out.str(), "grid-" + grid.id(), "csv");
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Krein-space single-photon verification harness"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON suite configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "random seed (overrides the config)");
  app.add_option("--out-dir", g.out_dir, "directory for report files");
  app.add_option("--format", g.format, "json | csv | markdown");
  app.add_option("--threads", g.threads, "worker threads (0 = hardware concurrency)");

  std::function<int()> action;
  auto session = [&] { return open_session(g); };

  auto* eig = app.add_subcommand("verify-eigensystem", "geometry and weight-matrix invariants");
  eig->callback([&] { action = [&] { return run_suites(session(), {"eigensystem"}, "verify-eigensystem"); }; });

  IsometryOptions iso;
  auto* isometry = app.add_subcommand("verify-isometry", "Krein isometry of the representation");
  isometry->add_option("--state", iso.state, "state, e.g. \"w1p:exp_ir + 0.5i*wr2:gauss_ir\" (omit for the suite)");
  isometry->add_option("--partner", iso.partner, "second state (default: --state)");
  isometry->add_option("--boost-rapidity", iso.rapidity, "boost rapidity");
  isometry->add_option("--axis", iso.axis, "boost axis: x, y, z or \"a,b,c\"");
  isometry->add_option("--rotation-angle", iso.rotation, "rotation angle applied after the boost");
  isometry->add_option("--rotation-axis", iso.rotation_axis, "rotation axis");
  isometry->add_flag("--conjugate", iso.conjugate, "use the conjugate action J' U J'");
  isometry->add_option("--grid", iso.grid_path, "JSON grid configuration file")->check(CLI::ExistingFile);
  isometry->callback([&] { action = [&] { return verify_isometry_cmd(session(), iso); }; });

  auto* tr = app.add_subcommand("verify-transversal", "transversal-sector invariants");
  tr->callback([&] { action = [&] { return run_suites(session(), {"transversal"}, "verify-transversal"); }; });

  std::string alpha_spec;
  int theta_samples = 100;
  double r_min = 1e-2, r_max = 1e2;
  auto* theta = app.add_subcommand("extract-theta", "Wigner angles of a Lorentz transformation");
  theta->add_option("--alpha", alpha_spec, "product of boost:<axis>:<rapidity> and rotation:<axis>:<angle>")
      ->required();
  theta->add_option("--samples", theta_samples, "number of random momenta");
  theta->add_option("--r-min", r_min, "smallest radius");
  theta->add_option("--r-max", r_max, "largest radius");
  theta->callback([&] { action = [&] { return extract_theta_cmd(session(), alpha_spec, theta_samples, r_min, r_max); }; });

  std::string s0_profile;
  int s0_order = 4;
  double s0_tol = 1e-8;
  bool s0_cone = false;
  auto* s0 = app.add_subcommand("check-s0", "S0 membership of a library test function");
  s0->add_option("--profile", s0_profile, "library test function")->required();
  s0->add_option("--order", s0_order, "derivative order K");
  s0->add_option("--tol", s0_tol, "tolerance");
  s0->add_flag("--cone", s0_cone, "check the restriction to the cone");
  s0->callback([&] { action = [&] { return check_s0_cmd(session(), s0_profile, s0_order, s0_tol, s0_cone); }; });

  std::string f_profile, f_x = "0,0,0,0", f_pol = "1,0,0,0";
  bool f_strict = false;
  auto* fourier = app.add_subcommand("fourier", "position-space value of a cone wavefunction");
  fourier->add_option("--profile", f_profile, "library test function or state specification")->required();
  fourier->add_option("--x", f_x, "spacetime point \"t,x,y,z\"");
  fourier->add_option("--polarization", f_pol, "constant polarization for library test functions");
  fourier->add_flag("--strict", f_strict, "fail on oscillatory quadrature");
  fourier->callback([&] { action = [&] { return fourier_cmd(session(), f_profile, f_x, f_pol, f_strict); }; });

  std::vector<std::string> modes;
  int cutoff = 2;
  bool dump = false;
  auto* fock = app.add_subcommand("verify-fock", "Gupta-Bleuler operator on a truncated Fock space");
  fock->add_option("--modes", modes, "comma-separated state specifications (omit for the suite)")->delimiter(',');
  fock->add_option("--cutoff", cutoff, "maximum total occupation");
  fock->add_flag("--dump-matrices", dump, "write j, eta and a^+ as CSV to the output directory");
  fock->callback([&] { action = [&] { return verify_fock_cmd(session(), modes, cutoff, dump); }; });

  auto* all = app.add_subcommand("run-all", "every suite selected by the configuration");
  all->callback([&] { action = [&] { return run_suites(session(), {}, "run-all"); }; });

  std::string p_text;
  auto* mat = app.add_subcommand("dump-matrix", "B(p), its eigensystem and J'(p) as JSON");
  mat->add_option("--p", p_text, "spatial momentum \"p1,p2,p3\"")->required();
  mat->callback([&] { action = [&] { return dump_matrix_cmd(session(), p_text); }; });

  std::string grid_path;
  auto* grid = app.add_subcommand("dump-grid", "quadrature nodes and weights as CSV");
  grid->add_option("--grid", grid_path, "JSON grid configuration file")->check(CLI::ExistingFile);
  grid->callback([&] { action = [&] { return dump_grid_cmd(session(), grid_path); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    return action();
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }
}
