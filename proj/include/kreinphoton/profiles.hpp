#pragma once

// Named test states: radial envelopes (times angular polynomials) multiplied
// by a polarization vector. Envelopes flagged s0_compatible vanish at the
// apex together with all their derivatives.
//
// Library, with s the scale parameter, n = p / r and the closed-form value of
// int |g|^2 dmu where one exists:
//
//   exp        e^{-r/s}                                     pi s^2 / 2
//   exp_ir     e^{-r/s - s/r}                               4 pi s^2 K_2(4)
//   gauss_ir   e^{-(r/s)^2 - (s/r)^2}                       2 pi s^2 K_1(4)
//   poly2_exp  (r/s)^2 e^{-r/s}                             15 pi s^2 / 4
//   aniso_ir   (1 + n3/2 + n1 n2/4) e^{-r/s - s/r}          (87/80) 4 pi s^2 K_2(4)
//   dipole_ir  n1 e^{-r/s - s/r}                            (4 pi / 3) s^2 K_2(4)
//
// The K_nu integrals follow from int_0^inf x^{nu-1} e^{-a x - b/x} dx
// = 2 (b/a)^{nu/2} K_nu(2 sqrt(ab)).

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kreinphoton/cone_geometry.hpp"
#include "kreinphoton/wavefunction.hpp"

namespace kreinphoton {

using ScalarConeFunction = std::function<Complex(const ConePoint&)>;

enum class EnvelopeKind { exp, exp_ir, gauss_ir, poly2_exp, aniso_ir, dipole_ir };

class Envelope {
 public:
  explicit Envelope(EnvelopeKind kind, double scale = 1.0);

  /// Throws ConfigError for unknown names or non-positive scale.
  static Envelope named(std::string_view name, double scale = 1.0);
  static std::vector<std::string> names();

  double operator()(const ConePoint& p) const;
  ScalarConeFunction function() const;

  EnvelopeKind kind() const { return kind_; }
  double scale() const { return scale_; }
  std::string name() const;
  bool s0_compatible() const;
  std::optional<double> analytic_norm_squared() const;

 private:
  EnvelopeKind kind_;
  double scale_;
};

enum class Polarization {
  transverse_plus,
  transverse_minus,
  gauge_inverse_square,
  gauge_square,
  e0,
  e1,
  e2,
  e3
};

/// Accepts w1p, w1m, wrm2, wr2, e0..e3.
Polarization parse_polarization(std::string_view name);
std::string to_string(Polarization pol);
Vec4 polarization_vector(Polarization pol, const ConePoint& p);

MomentumWaveFunction polarized(Polarization pol, const ScalarConeFunction& g, std::string description);
MomentumWaveFunction polarized(Polarization pol, const Envelope& g);

struct ProfileTerm {
  Complex coefficient{1.0, 0.0};
  Polarization polarization;
  Envelope envelope;
};

/// sum_k c_k g_k(p) w_k(p), with the eigensystem evaluated once per point.
MomentumWaveFunction combination(std::vector<ProfileTerm> terms, std::string description);

/// Parses a state such as "w1p:exp_ir + 0.5i*wr2:gauss_ir@2". Each term is
/// [coefficient*]polarization:envelope[@scale]; coefficients are real, a real
/// followed by i, or i. Throws ConfigError on malformed input.
MomentumWaveFunction parse_state(std::string_view spec);

}  // namespace kreinphoton
