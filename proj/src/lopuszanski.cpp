#include "kreinphoton/lopuszanski.hpp"

#include <cmath>
#include <cstdio>
#include <optional>

#include "kreinphoton/errors.hpp"
#include "kreinphoton/krein_core.hpp"

namespace kreinphoton {
namespace {

ConePoint transformed(const LorentzMatrix& lambda, const ConePoint& p) {
  const ConePoint q = lorentz_act_point(lambda, p);
  require_supported_radius(q);
  return q;
}

}  // namespace

RepElement::RepElement(Kind kind, Vec4 a, std::optional<SL2C> alpha)
    : kind_(kind), a_(std::move(a)), alpha_(std::move(alpha)) {
  if (!a_.allFinite()) throw ConfigError("translation vector must be finite");
  if (alpha_) lambda_ = spinor_to_lorentz(*alpha_);
}

RepElement RepElement::translation(const Vec4& a) { return RepElement(Kind::translation, a, std::nullopt); }

RepElement RepElement::lorentz(const SL2C& alpha) { return RepElement(Kind::lorentz, Vec4::Zero(), alpha); }

RepElement RepElement::conjugate_lorentz(const SL2C& alpha) {
  return RepElement(Kind::conjugate_lorentz, Vec4::Zero(), alpha);
}

const SL2C& RepElement::spinor() const {
  if (!alpha_) throw ConfigError("translation has no spinor");
  return *alpha_;
}

const LorentzMatrix& RepElement::lambda() const {
  if (!lambda_) throw ConfigError("translation has no Lorentz matrix");
  return *lambda_;
}

MomentumWaveFunction RepElement::apply(const MomentumWaveFunction& phi) const {
  switch (kind_) {
    case Kind::translation: return translate(a_, phi);
    case Kind::lorentz: return lorentz_act_rep(*alpha_, phi);
    case Kind::conjugate_lorentz: return conjugate_lorentz_act(*alpha_, phi);
  }
  return phi;
}

std::string RepElement::describe() const {
  char buf[160];
  if (kind_ == Kind::translation) {
    std::snprintf(buf, sizeof(buf), "T(%.6g, %.6g, %.6g, %.6g)", a_[0], a_[1], a_[2], a_[3]);
    return buf;
  }
  const auto& m = alpha_->matrix();
  std::snprintf(buf, sizeof(buf), "%s[%.6g%+.6gi, %.6g%+.6gi; %.6g%+.6gi, %.6g%+.6gi]",
                kind_ == Kind::lorentz ? "U" : "J'UJ'", m(0, 0).real(), m(0, 0).imag(),
                m(0, 1).real(), m(0, 1).imag(), m(1, 0).real(), m(1, 0).imag(), m(1, 1).real(),
                m(1, 1).imag());
  return buf;
}

MomentumWaveFunction translate(const Vec4& a, const MomentumWaveFunction& phi) {
  return phi.with_phase(
      [a](const ConePoint& p) { return a[0] * p.r() - a[1] * p[0] - a[2] * p[1] - a[3] * p[2]; },
      "T(a)" + phi.description());
}

MomentumWaveFunction lorentz_act_rep(const SL2C& alpha, const MomentumWaveFunction& phi) {
  const LorentzMatrix lambda = spinor_to_lorentz(alpha);
  const Mat4c outer = spinor_to_lorentz(alpha.inverse()).matrix().cast<Complex>();
  return MomentumWaveFunction(
      [phi, lambda, outer](const ConePoint& p) -> Vec4c { return outer * phi(transformed(lambda, p)); },
      "U" + phi.description());
}

MomentumWaveFunction conjugate_lorentz_act(const SL2C& alpha, const MomentumWaveFunction& phi) {
  const LorentzMatrix lambda = spinor_to_lorentz(alpha);
  const Mat4 inverse = spinor_to_lorentz(alpha.inverse()).matrix();
  return MomentumWaveFunction(
      [phi, lambda, inverse](const ConePoint& p) -> Vec4c {
        const ConePoint q = transformed(lambda, p);
        const Mat4 m = fundamental_symmetry(p).entries * inverse * fundamental_symmetry(q).entries;
        return m.cast<Complex>() * phi(q);
      },
      "J'UJ'" + phi.description());
}

double verify_representation_law(const SL2C& alpha, const SL2C& beta,
                                  const MomentumWaveFunction& phi, std::span<const ConePoint> points) {
  const auto nested = lorentz_act_rep(alpha, lorentz_act_rep(beta, phi));
  const auto composed = lorentz_act_rep(alpha * beta, phi);
  double worst = 0.0;
  for (const ConePoint& p : points) worst = std::max(worst, (nested(p) - composed(p)).norm());
  return worst;
}

double verify_covariance(const SL2C& alpha, const Vec4& a, const MomentumWaveFunction& phi,
                         std::span<const ConePoint> points) {
  const auto lhs = lorentz_act_rep(alpha, translate(a, lorentz_act_rep(alpha.inverse(), phi)));
  const Vec4 shifted = spinor_to_lorentz(alpha).inverse().apply(a);
  const auto rhs = translate(shifted, phi);
  double worst = 0.0;
  for (const ConePoint& p : points) worst = std::max(worst, (lhs(p) - rhs(p)).norm());
  return worst;
}

IsometryReport verify_isometry(const RepElement& g, const MomentumWaveFunction& phi,
                               const MomentumWaveFunction& psi, const QuadratureGrid& grid) {
  const bool same = phi.shares_evaluator(psi);
  const SampledWaveFunction a(phi, grid);
  const SampledWaveFunction ga(g.apply(phi), grid);
  std::optional<SampledWaveFunction> b, gb;
  if (!same) {
    b.emplace(psi, grid);
    gb.emplace(g.apply(psi), grid);
  }
  const SampledWaveFunction& rb = same ? a : *b;
  const SampledWaveFunction& rgb = same ? ga : *gb;
  IsometryReport out{krein_inner(a, rb), krein_inner(ga, rgb), hilbert_inner(a, rb), hilbert_inner(ga, rgb), 0.0};
  out.estimated_error = out.krein_before.estimated_error + out.krein_after.estimated_error;
  return out;
}

}  // namespace kreinphoton
