#include "kreinphoton/profiles.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "kreinphoton/errors.hpp"
#include "kreinphoton/krein_core.hpp"

namespace kreinphoton {
namespace {

using std::numbers::pi;

struct EnvelopeEntry {
  EnvelopeKind kind;
  const char* name;
};

constexpr EnvelopeEntry kEnvelopes[] = {
    {EnvelopeKind::exp, "exp"},           {EnvelopeKind::exp_ir, "exp_ir"},
    {EnvelopeKind::gauss_ir, "gauss_ir"}, {EnvelopeKind::poly2_exp, "poly2_exp"},
    {EnvelopeKind::aniso_ir, "aniso_ir"}, {EnvelopeKind::dipole_ir, "dipole_ir"},
};

struct PolarizationEntry {
  Polarization pol;
  const char* name;
};

constexpr PolarizationEntry kPolarizations[] = {
    {Polarization::transverse_plus, "w1p"},      {Polarization::transverse_minus, "w1m"},
    {Polarization::gauge_inverse_square, "wrm2"}, {Polarization::gauge_square, "wr2"},
    {Polarization::e0, "e0"},                    {Polarization::e1, "e1"},
    {Polarization::e2, "e2"},                    {Polarization::e3, "e3"},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, std::string_view context) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError("cannot parse number '" + std::string(s) + "' in '" + std::string(context) + "'");
  }
  return v;
}

Complex parse_coefficient(std::string_view s, std::string_view context) {
  s = trim(s);
  if (s == "i") return {0.0, 1.0};
  if (s == "-i") return {0.0, -1.0};
  if (!s.empty() && s.back() == 'i') return {0.0, parse_double(s.substr(0, s.size() - 1), context)};
  return {parse_double(s, context), 0.0};
}

}  // namespace

Envelope::Envelope(EnvelopeKind kind, double scale) : kind_(kind), scale_(scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("envelope scale must be positive");
}

Envelope Envelope::named(std::string_view name, double scale) {
  for (const auto& e : kEnvelopes) {
    if (name == e.name) return Envelope(e.kind, scale);
  }
  throw ConfigError("unknown envelope '" + std::string(name) + "'");
}

std::vector<std::string> Envelope::names() {
  std::vector<std::string> out;
  for (const auto& e : kEnvelopes) out.emplace_back(e.name);
  return out;
}

std::string Envelope::name() const {
  for (const auto& e : kEnvelopes) {
    if (e.kind == kind_) return e.name;
  }
  return "?";
}

double Envelope::operator()(const ConePoint& p) const {
  const double x = p.r() / scale_;
  const Vec3 n = p.spatial() / p.r();
  switch (kind_) {
    case EnvelopeKind::exp: return std::exp(-x);
    case EnvelopeKind::exp_ir: return std::exp(-x - 1.0 / x);
    case EnvelopeKind::gauss_ir: return std::exp(-x * x - 1.0 / (x * x));
    case EnvelopeKind::poly2_exp: return x * x * std::exp(-x);
    case EnvelopeKind::aniso_ir: return (1.0 + 0.5 * n[2] + 0.25 * n[0] * n[1]) * std::exp(-x - 1.0 / x);
    case EnvelopeKind::dipole_ir: return n[0] * std::exp(-x - 1.0 / x);
  }
  return 0.0;
}

ScalarConeFunction Envelope::function() const {
  return [self = *this](const ConePoint& p) { return Complex(self(p)); };
}

bool Envelope::s0_compatible() const {
  return kind_ != EnvelopeKind::exp && kind_ != EnvelopeKind::poly2_exp;
}

std::optional<double> Envelope::analytic_norm_squared() const {
  const double s2 = scale_ * scale_;
  switch (kind_) {
    case EnvelopeKind::exp: return pi * s2 / 2.0;
    case EnvelopeKind::exp_ir: return 4.0 * pi * s2 * std::cyl_bessel_k(2.0, 4.0);
    case EnvelopeKind::gauss_ir: return 2.0 * pi * s2 * std::cyl_bessel_k(1.0, 4.0);
    case EnvelopeKind::poly2_exp: return 15.0 * pi * s2 / 4.0;
    case EnvelopeKind::aniso_ir: return 87.0 / 80.0 * 4.0 * pi * s2 * std::cyl_bessel_k(2.0, 4.0);
    case EnvelopeKind::dipole_ir: return 4.0 * pi / 3.0 * s2 * std::cyl_bessel_k(2.0, 4.0);
  }
  return std::nullopt;
}

Polarization parse_polarization(std::string_view name) {
  name = trim(name);
  for (const auto& e : kPolarizations) {
    if (name == e.name) return e.pol;
  }
  throw ConfigError("unknown polarization '" + std::string(name) + "'");
}

std::string to_string(Polarization pol) {
  for (const auto& e : kPolarizations) {
    if (e.pol == pol) return e.name;
  }
  return "?";
}

Vec4 polarization_vector(Polarization pol, const ConePoint& p) {
  switch (pol) {
    case Polarization::transverse_plus: return eigenvector(p, EigenMode::transverse_plus);
    case Polarization::transverse_minus: return eigenvector(p, EigenMode::transverse_minus);
    case Polarization::gauge_inverse_square: return eigenvector(p, EigenMode::gauge_inverse_square);
    case Polarization::gauge_square: return eigenvector(p, EigenMode::gauge_square);
    case Polarization::e0: return Vec4::Unit(0);
    case Polarization::e1: return Vec4::Unit(1);
    case Polarization::e2: return Vec4::Unit(2);
    case Polarization::e3: return Vec4::Unit(3);
  }
  return Vec4::Zero();
}

MomentumWaveFunction polarized(Polarization pol, const ScalarConeFunction& g, std::string description) {
  return MomentumWaveFunction(
      [pol, g](const ConePoint& p) -> Vec4c { return g(p) * polarization_vector(pol, p).cast<Complex>(); },
      std::move(description));
}

MomentumWaveFunction polarized(Polarization pol, const Envelope& g) {
  char scale[32];
  std::snprintf(scale, sizeof(scale), "%g", g.scale());
  std::string description = to_string(pol) + ":" + g.name();
  if (g.scale() != 1.0) description += std::string("@") + scale;
  return polarized(pol, g.function(), std::move(description));
}

MomentumWaveFunction combination(std::vector<ProfileTerm> terms, std::string description) {
  bool needs_eigensystem = false;
  for (const auto& t : terms) {
    needs_eigensystem = needs_eigensystem || t.polarization < Polarization::e0;
  }
  return MomentumWaveFunction(
      [terms = std::move(terms), needs_eigensystem](const ConePoint& p) -> Vec4c {
        std::optional<EigenSystem> sys;
        if (needs_eigensystem) sys = b_eigensystem(p);
        Vec4c out = Vec4c::Zero();
        for (const auto& t : terms) {
          const int k = static_cast<int>(t.polarization);
          const Vec4 w = k < 4 ? (*sys)[k].vector : Vec4::Unit(k - 4);
          out += (t.coefficient * t.envelope(p)) * w.cast<Complex>();
        }
        return out;
      },
      std::move(description));
}

MomentumWaveFunction parse_state(std::string_view spec) {
  const std::string_view whole = spec;
  std::vector<ProfileTerm> terms;
  while (!spec.empty()) {
    const std::size_t plus = spec.find('+');
    std::string_view term = trim(spec.substr(0, plus));
    spec = plus == std::string_view::npos ? std::string_view{} : spec.substr(plus + 1);
    if (term.empty()) throw ConfigError("empty term in state '" + std::string(whole) + "'");

    Complex coefficient{1.0, 0.0};
    if (const std::size_t star = term.find('*'); star != std::string_view::npos) {
      coefficient = parse_coefficient(term.substr(0, star), whole);
      term = trim(term.substr(star + 1));
    }
    const std::size_t colon = term.find(':');
    if (colon == std::string_view::npos) {
      throw ConfigError("state term '" + std::string(term) + "' needs polarization:envelope");
    }
    const Polarization pol = parse_polarization(term.substr(0, colon));
    std::string_view env = trim(term.substr(colon + 1));
    double scale = 1.0;
    if (const std::size_t at = env.find('@'); at != std::string_view::npos) {
      scale = parse_double(env.substr(at + 1), whole);
      env = trim(env.substr(0, at));
    }
    terms.push_back({coefficient, pol, Envelope::named(env, scale)});
  }
  if (terms.empty()) throw ConfigError("empty state specification");
  return combination(std::move(terms), std::string(trim(whole)));
}

}  // namespace kreinphoton
