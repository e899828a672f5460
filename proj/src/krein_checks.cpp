#include <algorithm>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <Eigen/Eigenvalues>

#include "kreinphoton/krein_core.hpp"
#include "kreinphoton/krein_core_formulas.hpp"

namespace Eigen {

// Boost's own Eigen adaptor predates Eigen 3.4 (no infinity/quiet_NaN), so the
// traits are spelled out from std::numeric_limits here.
template <>
struct NumTraits<boost::multiprecision::cpp_bin_float_quad>
    : GenericNumTraits<boost::multiprecision::cpp_bin_float_quad> {
  using Real = boost::multiprecision::cpp_bin_float_quad;
  using NonInteger = Real;
  using Nested = Real;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = HugeCost,
    AddCost = HugeCost,
    MulCost = HugeCost
  };
  static Real dummy_precision() { return Real(1e-30); }
};

}  // namespace Eigen

namespace kreinphoton {
namespace {

using Quad = boost::multiprecision::cpp_bin_float_quad;

template <class T>
double to_double(const T& v) {
  return static_cast<double>(v);
}

template <class T>
double max_abs(const formulas::Matrix4<T>& m) {
  T best = T(0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      using std::abs;
      best = std::max<T>(best, abs(m(i, j)));
    }
  return to_double(best);
}

template <class T>
EigenCrossCheck cross_check(const ConePoint& p) {
  require_supported_radius(p);
  using M = formulas::Matrix4<T>;
  const T p1 = T(p[0]);
  const T p2 = T(p[1]);
  const T p3 = T(p[2]);
  const M b = formulas::b_matrix<T>(p1, p2, p3);
  const auto pairs = formulas::eigensystem<T>(p1, p2, p3, kAxisEpsilon);
  const M j = formulas::j_bar<T>();
  const M id = M::Identity();

  EigenCrossCheck out;
  M recon = M::Zero();
  M w;
  for (int i = 0; i < 4; ++i) {
    const auto& pair = pairs[static_cast<std::size_t>(i)];
    recon += pair.eigenvalue * pair.vector * pair.vector.transpose();
    w.col(i) = pair.vector;
    const formulas::Vector4<T> res = b * pair.vector - pair.eigenvalue * pair.vector;
    using std::sqrt;
    out.eigen_residual = std::max(out.eigen_residual, to_double(T(sqrt(res.squaredNorm()))));
  }
  out.reconstruction = max_abs<T>(M(b - recon));
  out.orthonormality = max_abs<T>(M(w.transpose() * w - id));
  const M jp = j * b;
  out.involution = max_abs<T>(M(jp * jp - id));
  out.b_self_adjointness = max_abs<T>(M(b * jp - jp.transpose() * b));
  out.krein_collapse = max_abs<T>(M(b * j * b - j));
  for (int i = 0; i < 2; ++i) {
    using std::sqrt;
    const auto& w = pairs[static_cast<std::size_t>(i)].vector;
    const formulas::Vector4<T> bw = b * w - w;
    const formulas::Vector4<T> jw = j * w - w;
    out.transversal_defect = std::max({out.transversal_defect, to_double(T(sqrt(bw.squaredNorm()))),
                                       to_double(T(sqrt(jw.squaredNorm())))});
  }

  Eigen::SelfAdjointEigenSolver<M> solver(b, Eigen::EigenvaluesOnly);
  const T r2 = p1 * p1 + p2 * p2 + p3 * p3;
  const T floor = std::min({T(1), r2, T(1) / r2});
  out.positivity_margin = to_double(T(solver.eigenvalues().minCoeff() - floor));
  return out;
}

}  // namespace

EigenCrossCheck cross_check_double(const ConePoint& p) { return cross_check<double>(p); }

EigenCrossCheck cross_check_extended(const ConePoint& p) { return cross_check<Quad>(p); }

}  // namespace kreinphoton
