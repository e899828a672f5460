#pragma once

// The Krein-isometric representation of the Poincare group on cone
// wavefunctions:
//
//   T(a) phi(p)     = e^{i a.p} phi(p)
//   U(alpha) phi(p) = Lambda(alpha^-1) phi(Lambda(alpha) p)
//
// and its conjugate J' U J'. U is not bounded in the Hilbert norm.

#include <cmath>
#include <optional>
#include <span>
#include <string>

#include "kreinphoton/cone_geometry.hpp"
#include "kreinphoton/wavefunction.hpp"

namespace kreinphoton {

class RepElement {
 public:
  enum class Kind { translation, lorentz, conjugate_lorentz };

  static RepElement translation(const Vec4& a);
  static RepElement lorentz(const SL2C& alpha);
  static RepElement conjugate_lorentz(const SL2C& alpha);

  Kind kind() const { return kind_; }
  const Vec4& shift() const { return a_; }
  /// Throws ConfigError for translations.
  const SL2C& spinor() const;
  const LorentzMatrix& lambda() const;

  MomentumWaveFunction apply(const MomentumWaveFunction& phi) const;
  std::string describe() const;

 private:
  RepElement(Kind kind, Vec4 a, std::optional<SL2C> alpha);

  Kind kind_;
  Vec4 a_ = Vec4::Zero();
  std::optional<SL2C> alpha_;
  std::optional<LorentzMatrix> lambda_;
};

MomentumWaveFunction translate(const Vec4& a, const MomentumWaveFunction& phi);

/// Evaluation throws RangeError when Lambda(alpha) p leaves the supported
/// radius window.
MomentumWaveFunction lorentz_act_rep(const SL2C& alpha, const MomentumWaveFunction& phi);

/// p -> J'(p) Lambda(alpha^-1) J'(Lambda(alpha) p) phi(Lambda(alpha) p)
MomentumWaveFunction conjugate_lorentz_act(const SL2C& alpha, const MomentumWaveFunction& phi);

/// max over points of |U(alpha) U(beta) phi - U(alpha beta) phi|_2
double verify_representation_law(const SL2C& alpha, const SL2C& beta,
                                 const MomentumWaveFunction& phi, std::span<const ConePoint> points);

/// max over points of |U(alpha) T(a) U(alpha)^-1 phi - T(Lambda(alpha)^-1 a) phi|_2
double verify_covariance(const SL2C& alpha, const Vec4& a, const MomentumWaveFunction& phi,
                         std::span<const ConePoint> points);

struct IsometryReport {
  InnerProductReport krein_before;
  InnerProductReport krein_after;
  InnerProductReport hilbert_before;
  InnerProductReport hilbert_after;
  /// Sum of the quadrature error estimates of the two Krein products.
  double estimated_error = 0.0;

  double krein_deviation() const { return std::abs(krein_after.value - krein_before.value); }
  /// ||U phi|| / ||phi|| when phi == psi.
  double hilbert_norm_ratio() const { return std::sqrt(std::abs(hilbert_after.value / hilbert_before.value)); }
};

IsometryReport verify_isometry(const RepElement& g, const MomentumWaveFunction& phi,
                               const MomentumWaveFunction& psi, const QuadratureGrid& grid);

}  // namespace kreinphoton
