#include "kreinphoton/transversal.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "kreinphoton/errors.hpp"
#include "kreinphoton/krein_core.hpp"
#include "kreinphoton/lopuszanski.hpp"
#include "kreinphoton/parallel.hpp"

namespace kreinphoton {
namespace {

Vec4 w1(const EigenSystem& sys, int i) {
  return sys[i == 0 ? EigenMode::transverse_plus : EigenMode::transverse_minus].vector;
}

}  // namespace

TransversalPair TransversalPair::zero() {
  const ScalarConeFunction z = [](const ConePoint&) { return Complex(0.0); };
  return {z, z, "0"};
}

MomentumWaveFunction embed(const TransversalPair& pair) {
  return MomentumWaveFunction(
      [pair](const ConePoint& p) -> Vec4c {
        const EigenSystem sys = b_eigensystem(p);
        return w1(sys, 0).cast<Complex>() * pair.f_plus(p) + w1(sys, 1).cast<Complex>() * pair.f_minus(p);
      },
      "embed(" + pair.description + ")");
}

TransversalPair project_tr(const MomentumWaveFunction& phi) {
  auto component = [phi](int i) -> ScalarConeFunction {
    return [phi, i](const ConePoint& p) { return w1(b_eigensystem(p), i).cast<Complex>().dot(phi(p)); };
  };
  return {component(0), component(1), "tr(" + phi.description() + ")"};
}

TransversalPair induced_act(const SL2C& alpha, const TransversalPair& pair) {
  TransversalPair out = project_tr(lorentz_act_rep(alpha, embed(pair)));
  out.description = "U_tr" + pair.description;
  return out;
}

TransversalPair induced_translate(const Vec4& a, const TransversalPair& pair) {
  auto phase = [a](const ScalarConeFunction& f) -> ScalarConeFunction {
    return [a, f](const ConePoint& p) {
      return std::polar(1.0, a[0] * p.r() - a[1] * p[0] - a[2] * p[1] - a[3] * p[2]) * f(p);
    };
  };
  return {phase(pair.f_plus), phase(pair.f_minus), "T_tr" + pair.description};
}

InnerProductReport pair_norm_squared(const TransversalPair& pair, const QuadratureGrid& grid) {
  const ConeFunction density = [pair](const ConePoint& p) {
    return Complex(std::norm(pair.f_plus(p)) + std::norm(pair.f_minus(p)));
  };
  const Complex base = integrate(grid, density);
  const Complex fine = integrate(grid.refined(), density);
  return {base, grid.id(), std::abs(base - fine)};
}

ThetaSample extract_theta(const SL2C& alpha, const ConePoint& p) {
  const LorentzMatrix lambda = spinor_to_lorentz(alpha);
  const ConePoint q = lorentz_act_point(lambda, p);
  if (in_axis_zone(p) || in_axis_zone(q)) {
    throw AxisZone("Wigner angle undefined in the axis convention zone");
  }
  const Mat4 inverse = spinor_to_lorentz(alpha.inverse()).matrix();
  const EigenSystem at_p = b_eigensystem(p);
  const EigenSystem at_q = b_eigensystem(q);
  Mat2 m;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) m(i, j) = w1(at_p, i).dot(inverse * w1(at_q, j));
  }
  ThetaSample out{alpha, p, std::atan2(m(0, 1), m(0, 0)), 0.0, m};
  out.residual = (m.transpose() * m - Mat2::Identity()).cwiseAbs().maxCoeff();
  return out;
}

MomentumWaveFunction unphysical_remainder(const SL2C& alpha, const TransversalPair& pair) {
  return lorentz_act_rep(alpha, embed(pair)) - embed(induced_act(alpha, pair));
}

std::array<Complex, 2> helicity_eigencheck(double psi, const ConePoint& p) {
  const ThetaSample s = extract_theta(SL2C::rotation(p.spatial(), psi), p);
  const Eigen::EigenSolver<Mat2> solver(s.block, false);
  std::array<Complex, 2> ev{solver.eigenvalues()[0], solver.eigenvalues()[1]};
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return a.imag() > b.imag(); });
  return ev;
}

}  // namespace kreinphoton
