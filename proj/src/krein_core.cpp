#include "kreinphoton/krein_core.hpp"

#include <cstdio>
#include <string>

#include "kreinphoton/errors.hpp"
#include "kreinphoton/krein_core_formulas.hpp"

namespace kreinphoton {

void require_supported_radius(const ConePoint& p) {
  if (!(p.r() >= kMinSupportedRadius && p.r() <= kMaxSupportedRadius)) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "radius %.6g outside [%.0e, %.0e]", p.r(), kMinSupportedRadius,
                  kMaxSupportedRadius);
    throw RangeError(buf);
  }
}

bool in_axis_zone(const ConePoint& p) {
  const Vec3& v = p.spatial();
  return std::hypot(v[0], v[1]) < kAxisEpsilon * p.r();
}

WeightMatrix b_matrix(const ConePoint& p) {
  require_supported_radius(p);
  return {p, formulas::b_matrix<double>(p[0], p[1], p[2])};
}

EigenSystem b_eigensystem(const ConePoint& p) {
  require_supported_radius(p);
  bool axis = false;
  const auto raw = formulas::eigensystem<double>(p[0], p[1], p[2], kAxisEpsilon, &axis);
  EigenSystem sys{p, {}, axis};
  for (std::size_t i = 0; i < 4; ++i) sys.pairs[i] = {raw[i].eigenvalue, raw[i].vector};
  return sys;
}

Vec4 eigenvector(const ConePoint& p, EigenMode m) { return b_eigensystem(p)[m].vector; }

const Mat4& j_bar() {
  static const Mat4 j = formulas::j_bar<double>();
  return j;
}

FundamentalSymmetry fundamental_symmetry(const ConePoint& p) {
  return {p, j_bar() * b_matrix(p).entries};
}

Mat4 krein_density_matrix(const ConePoint& p) {
  const Mat4 b = b_matrix(p).entries;
  return b * j_bar() * b;
}

Complex hilbert_form(const ConePoint& p, const Vec4c& a, const Vec4c& b) {
  return a.dot(b_matrix(p).entries.cast<Complex>() * b);
}

Complex krein_form(const Vec4c& a, const Vec4c& b) {
  return -std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1] + std::conj(a[2]) * b[2] +
         std::conj(a[3]) * b[3];
}

}  // namespace kreinphoton
