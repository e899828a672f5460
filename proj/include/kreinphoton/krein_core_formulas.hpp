#pragma once

// Closed-form B(p) and its eigenvectors, generic over the scalar type so the
// same expressions can be evaluated in double and in extended precision.

#include <array>
#include <cmath>

#include <Eigen/Core>

namespace kreinphoton::formulas {

template <class T>
using Matrix4 = Eigen::Matrix<T, 4, 4>;
template <class T>
using Vector4 = Eigen::Matrix<T, 4, 1>;

template <class T>
struct EigenPairT {
  T eigenvalue;
  Vector4<T> vector;
};

/// Entries of B(p) for spatial momentum (p1, p2, p3), r = |p|.
template <class T>
Matrix4<T> b_matrix(const T& p1, const T& p2, const T& p3) {
  using std::sqrt;
  const T r2 = p1 * p1 + p2 * p2 + p3 * p3;
  const T r = sqrt(r2);
  const T inv_r2 = T(1) / r2;
  const T diag00 = (inv_r2 + r2) / T(2);
  const T mixed = (inv_r2 - r2) / (T(2) * r);
  const T spatial = (inv_r2 + r2 - T(2)) / (T(2) * r2);
  const std::array<T, 3> p{p1, p2, p3};

  Matrix4<T> b;
  b(0, 0) = diag00;
  for (int i = 0; i < 3; ++i) {
    b(0, i + 1) = mixed * p[i];
    b(i + 1, 0) = mixed * p[i];
    for (int j = 0; j < 3; ++j) {
      b(i + 1, j + 1) = spatial * p[i] * p[j] + (i == j ? T(1) : T(0));
    }
  }
  return b;
}

/// Eigenpairs ordered (1, 1, r^-2, r^2): w1+, w1-, w_{r^-2}, w_{r^2}.
///
/// w1+ and w1- divide by rho = sqrt(p1^2 + p2^2). When rho < axis_epsilon * r
/// they are evaluated at azimuth 0 with the same polar angle, i.e.
/// w1+ = (0, 0, -1, 0) and w1- = (0, p3/r, 0, -rho/r).
template <class T>
std::array<EigenPairT<T>, 4> eigensystem(const T& p1, const T& p2, const T& p3,
                                         double axis_epsilon, bool* axis_convention = nullptr) {
  using std::sqrt;
  const T r = sqrt(p1 * p1 + p2 * p2 + p3 * p3);
  const T rho = sqrt(p1 * p1 + p2 * p2);
  const T inv_sqrt2 = T(1) / sqrt(T(2));
  const bool on_axis = rho < T(axis_epsilon) * r;
  if (axis_convention) *axis_convention = on_axis;

  // Unit vector in the (p1, p2) plane; azimuth 0 on the axis.
  const T c = on_axis ? T(1) : p1 / rho;
  const T s = on_axis ? T(0) : p2 / rho;

  std::array<EigenPairT<T>, 4> pairs;
  pairs[0].eigenvalue = T(1);
  pairs[0].vector << T(0), s, -c, T(0);
  pairs[1].eigenvalue = T(1);
  pairs[1].vector << T(0), c * p3 / r, s * p3 / r, -rho / r;
  pairs[2].eigenvalue = T(1) / (r * r);
  pairs[2].vector << inv_sqrt2, inv_sqrt2 * p1 / r, inv_sqrt2 * p2 / r, inv_sqrt2 * p3 / r;
  pairs[3].eigenvalue = r * r;
  pairs[3].vector << inv_sqrt2, -inv_sqrt2 * p1 / r, -inv_sqrt2 * p2 / r, -inv_sqrt2 * p3 / r;
  return pairs;
}

template <class T>
Matrix4<T> j_bar() {
  Matrix4<T> j = Matrix4<T>::Identity();
  j(0, 0) = T(-1);
  return j;
}

}  // namespace kreinphoton::formulas
