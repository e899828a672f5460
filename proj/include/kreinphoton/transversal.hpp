#pragma once

// The physical subspace H_tr = { w1+ f+ + w1- f- } and the representation it
// carries. On H_tr the Krein product is positive and equals
// int (|f+|^2 + |f-|^2) dmu; U(alpha) maps H_tr into H_tr plus a Krein-null
// remainder along w_{r^-2}, and the induced action on (f+, f-) is
//
//   (f+, f-)(p) -> M(alpha, p) (f+, f-)(Lambda(alpha) p),
//   M_ij = w1_i(p)^T Lambda(alpha^-1) w1_j(Lambda(alpha) p),
//
// with M a rotation by the Wigner angle Theta(alpha, p).

#include <array>
#include <string>

#include "kreinphoton/cone_geometry.hpp"
#include "kreinphoton/profiles.hpp"
#include "kreinphoton/wavefunction.hpp"

namespace kreinphoton {

struct TransversalPair {
  ScalarConeFunction f_plus;
  ScalarConeFunction f_minus;
  std::string description = "pair";

  static TransversalPair zero();
};

MomentumWaveFunction embed(const TransversalPair& pair);

/// f+-(p) = w1+-(p)^T phi(p)
TransversalPair project_tr(const MomentumWaveFunction& phi);

TransversalPair induced_act(const SL2C& alpha, const TransversalPair& pair);
TransversalPair induced_translate(const Vec4& a, const TransversalPair& pair);

/// int (|f+|^2 + |f-|^2) dmu with a refinement error estimate.
InnerProductReport pair_norm_squared(const TransversalPair& pair, const QuadratureGrid& grid);

struct ThetaSample {
  SL2C alpha;
  ConePoint p;
  double theta = 0.0;
  /// |M^T M - I|_max
  double residual = 0.0;
  Mat2 block;
};

/// Throws AxisZone if p or Lambda(alpha) p lies in the axis convention zone.
ThetaSample extract_theta(const SL2C& alpha, const ConePoint& p);

/// U(alpha) embed(pair) - embed(induced_act(alpha, pair))
MomentumWaveFunction unphysical_remainder(const SL2C& alpha, const TransversalPair& pair);

/// Eigenvalues of the extracted block for the rotation by psi about p / |p|,
/// ordered by decreasing imaginary part.
std::array<Complex, 2> helicity_eigencheck(double psi, const ConePoint& p);

}  // namespace kreinphoton
