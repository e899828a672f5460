#include "kreinphoton/random_states.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

namespace kreinphoton {

Rng make_rng(std::uint64_t seed, std::string_view stream) {
  // FNV-1a, stable across platforms unlike std::hash
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : stream) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return Rng(seq);
}

Complex random_complex(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

Vec3 random_direction(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    for (int i = 0; i < 3; ++i) v[i] = n(rng);
  } while (v.norm() < 1e-8);
  return v.normalized();
}

ConePoint random_cone_point(Rng& rng, double r_min, double r_max) {
  std::uniform_real_distribution<double> u(std::log(r_min), std::log(r_max));
  const double r = std::exp(u(rng));
  return ConePoint(r * random_direction(rng));
}

Envelope random_envelope(Rng& rng, double min_scale, double max_scale) {
  static const EnvelopeKind kinds[] = {EnvelopeKind::exp_ir, EnvelopeKind::gauss_ir, EnvelopeKind::aniso_ir,
                                       EnvelopeKind::dipole_ir};
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_real_distribution<double> scale(min_scale, max_scale);
  const EnvelopeKind kind = kinds[pick(rng)];
  return Envelope(kind, scale(rng));
}

MomentumWaveFunction random_mixture(Rng& rng) {
  std::vector<ProfileTerm> terms;
  std::string description;
  for (auto pol : {Polarization::transverse_plus, Polarization::transverse_minus, Polarization::gauge_inverse_square,
                   Polarization::gauge_square}) {
    const Complex c = random_complex(rng);
    const Envelope g = random_envelope(rng);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s(%.4g%+.4gi)*%s:%s@%.4g", description.empty() ? "" : " + ", c.real(),
                  c.imag(), to_string(pol).c_str(), g.name().c_str(), g.scale());
    description += buf;
    terms.push_back({c, pol, g});
  }
  return combination(std::move(terms), description);
}

TransversalPair random_pair(Rng& rng) {
  auto component = [&]() -> ScalarConeFunction {
    const Envelope a = random_envelope(rng);
    const Envelope b = random_envelope(rng);
    const Complex ca = random_complex(rng);
    const Complex cb = random_complex(rng);
    return [a, b, ca, cb](const ConePoint& p) { return ca * a(p) + cb * b(p); };
  };
  ScalarConeFunction plus = component();
  ScalarConeFunction minus = component();
  return {std::move(plus), std::move(minus), "random pair"};
}

SL2C random_lorentz(Rng& rng, double max_rapidity) {
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> rapidity(-max_rapidity, max_rapidity);
  const Vec3 n1 = random_direction(rng);
  const double psi = angle(rng);
  const Vec3 n2 = random_direction(rng);
  const double chi = rapidity(rng);
  return SL2C::rotation(n1, psi) * SL2C::boost(n2, chi);
}

Vec4 random_translation(Rng& rng, double spread) {
  std::normal_distribution<double> n(0.0, spread);
  Vec4 a;
  for (int i = 0; i < 4; ++i) a[i] = n(rng);
  return a;
}

}  // namespace kreinphoton
