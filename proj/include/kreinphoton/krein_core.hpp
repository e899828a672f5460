#pragma once

// Pointwise 4x4 objects on the cone: the weight matrix B(p) of the Hilbert
// product, its closed-form eigensystem, the constant fundamental symmetry
// J = diag(-1, 1, 1, 1) and the fundamental symmetry J'(p) = J B(p).

#include <array>

#include "kreinphoton/cone_geometry.hpp"
#include "kreinphoton/types.hpp"

namespace kreinphoton {

inline constexpr double kMinSupportedRadius = 1e-6;
inline constexpr double kMaxSupportedRadius = 1e6;
/// Relative distance rho / r from the p3 axis below which the transverse
/// eigenvectors switch to the azimuth-0 convention.
inline constexpr double kAxisEpsilon = 1e-12;

/// Throws RangeError if r is outside [kMinSupportedRadius, kMaxSupportedRadius].
void require_supported_radius(const ConePoint& p);

bool in_axis_zone(const ConePoint& p);

struct WeightMatrix {
  ConePoint p;
  Mat4 entries;
};

enum class EigenMode { transverse_plus = 0, transverse_minus = 1, gauge_inverse_square = 2, gauge_square = 3 };

struct EigenPair {
  double eigenvalue;
  Vec4 vector;
};

/// Eigenpairs ordered (1, 1, r^-2, r^2).
struct EigenSystem {
  ConePoint p;
  std::array<EigenPair, 4> pairs;
  bool axis_convention = false;

  const EigenPair& operator[](EigenMode m) const { return pairs[static_cast<int>(m)]; }
  const EigenPair& operator[](int i) const { return pairs[static_cast<std::size_t>(i)]; }
};

struct FundamentalSymmetry {
  ConePoint p;
  Mat4 entries;
};

WeightMatrix b_matrix(const ConePoint& p);
EigenSystem b_eigensystem(const ConePoint& p);
/// Shorthand for b_eigensystem(p)[m].vector.
Vec4 eigenvector(const ConePoint& p, EigenMode m);
const Mat4& j_bar();
FundamentalSymmetry fundamental_symmetry(const ConePoint& p);

/// Literal product B J B. It equals J identically; forming it in double
/// loses ~max(r, 1/r)^4 eps, so the pointwise forms below use J directly.
Mat4 krein_density_matrix(const ConePoint& p);

/// a^dagger B(p) b
Complex hilbert_form(const ConePoint& p, const Vec4c& a, const Vec4c& b);
/// a^dagger B(p) J B(p) b, evaluated as a^dagger J b.
Complex krein_form(const Vec4c& a, const Vec4c& b);

/// Residuals of the algebraic identities tying B(p), its eigensystem and
/// J'(p) together, all as max-abs norms.
struct EigenCrossCheck {
  /// |B - sum_i lambda_i w_i w_i^T|
  double reconstruction = 0.0;
  /// max_i |B w_i - lambda_i w_i|_2
  double eigen_residual = 0.0;
  /// |W^T W - I|
  double orthonormality = 0.0;
  /// |(J B)^2 - I|
  double involution = 0.0;
  /// |B J' - J'^T B|
  double b_self_adjointness = 0.0;
  /// |B J B - J|
  double krein_collapse = 0.0;
  /// max over w1+, w1- of |B w - w|_2 and |J w - w|_2
  double transversal_defect = 0.0;
  /// smallest eigenvalue of B (independent symmetric solver) minus
  /// min(1, r^2, r^-2)
  double positivity_margin = 0.0;
};

/// Evaluates the closed forms and the identities in double precision. The
/// residuals grow like r^2 eps for large radii since B has entries ~ r^2 / 2.
EigenCrossCheck cross_check_double(const ConePoint& p);

/// Same identities with the closed forms evaluated in 113-bit binary
/// floating point from the (exact) double input coordinates.
EigenCrossCheck cross_check_extended(const ConePoint& p);

}  // namespace kreinphoton
