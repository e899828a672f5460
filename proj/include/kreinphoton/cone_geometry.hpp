#pragma once

// Light-cone points, the invariant measure dmu = d^3p / (2r), product
// quadrature on the cone, and the SL(2,C) -> Lorentz antihomomorphism.
//
// Conventions used throughout the library:
//  * metric signature (+,-,-,-), a.p = a0 p0 - a.p(spatial);
//  * X(p) = p0 I + p.sigma and Lambda(alpha) is defined by
//      X(Lambda(alpha) p) = alpha^dagger X(p) alpha,
//    so that Lambda(alpha beta) = Lambda(beta) Lambda(alpha);
//  * SL2C::rotation(n, psi) maps to the active right-handed rotation by psi
//    about n, SL2C::boost(n, chi) to the boost with Lambda^0_0 = cosh(chi)
//    moving a particle at rest along +n.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kreinphoton/types.hpp"

namespace kreinphoton {

class ConePoint {
 public:
  /// Throws ApexExcluded for the zero vector.
  explicit ConePoint(const Vec3& spatial);

  static ConePoint spherical(double r, double cos_theta, double phi);

  const Vec3& spatial() const { return spatial_; }
  double r() const { return r_; }
  double p0() const { return r_; }
  double operator[](int i) const { return spatial_[i]; }

  /// (p0, p1, p2, p3) with p0 = r.
  Vec4 four_momentum() const;

 private:
  Vec3 spatial_;
  double r_;
};

ConePoint cone_point(const Vec3& spatial);

/// Density 1/(2r) of the invariant measure with respect to d^3p.
double measure_weight(const ConePoint& p);

double minkowski_dot(const Vec4& a, const Vec4& b);
const Mat4& minkowski_metric();

class SL2C {
 public:
  using Matrix = Eigen::Matrix2cd;

  static constexpr double kDeterminantTolerance = 1e-12;

  /// Throws InvalidSpinor if |det - 1| exceeds kDeterminantTolerance.
  explicit SL2C(const Matrix& m);

  static SL2C identity();
  /// exp(chi n.sigma / 2); axis need not be normalized.
  static SL2C boost(const Vec3& axis, double rapidity);
  /// exp(i psi n.sigma / 2).
  static SL2C rotation(const Vec3& axis, double angle);

  const Matrix& matrix() const { return m_; }
  Complex a() const { return m_(0, 0); }
  Complex b() const { return m_(0, 1); }
  Complex c() const { return m_(1, 0); }
  Complex d() const { return m_(1, 1); }

  SL2C inverse() const;
  SL2C operator*(const SL2C& other) const;

 private:
  Matrix m_;
};

class LorentzMatrix {
 public:
  static constexpr double kMetricTolerance = 1e-10;

  /// Validates Lambda^T g Lambda = g, Lambda^0_0 >= 1 and det = +1 (relative
  /// to the size of the entries); throws NumericalError otherwise.
  explicit LorentzMatrix(const Mat4& m);

  static LorentzMatrix identity();

  const Mat4& matrix() const { return m_; }
  double operator()(int row, int col) const { return m_(row, col); }

  /// g Lambda^T g.
  LorentzMatrix inverse() const;
  LorentzMatrix operator*(const LorentzMatrix& other) const;
  Vec4 apply(const Vec4& v) const { return m_ * v; }

  /// max |Lambda^T g Lambda - g|.
  double metric_defect() const;

 private:
  struct Unchecked {};
  LorentzMatrix(const Mat4& m, Unchecked) : m_(m) {}
  Mat4 m_;
};

LorentzMatrix spinor_to_lorentz(const SL2C& alpha);

/// Lambda p, re-projected onto the cone. Throws ApexExcluded if the image
/// radius underflows 1e-300.
ConePoint lorentz_act_point(const LorentzMatrix& lambda, const ConePoint& p);

struct GridConfig {
  int angular_order = 40;
  int radial_order = 48;
  double ir_cutoff = 1e-5;
  double uv_cutoff = 100.0;
  /// Radial nodes are Gauss-Legendre in t = log(r + radial_shift).
  double radial_shift = 0.2;
  /// Self-test: |integral of e^{-r} dmu - 2 pi| must not exceed this.
  /// std::nullopt disables the check (coarse grids in tests).
  std::optional<double> self_test_tolerance = 1e-8;

  /// Throws ConfigError on invalid orders or cutoffs.
  void validate() const;

  /// Doubled orders and doubled uv_cutoff; used for error estimates.
  GridConfig refined() const;

  std::string id() const;

  bool operator==(const GridConfig&) const = default;
};

class QuadratureGrid {
 public:
  explicit QuadratureGrid(GridConfig config);

  const GridConfig& config() const { return config_; }
  const std::vector<ConePoint>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }
  double ir_cutoff() const { return config_.ir_cutoff; }
  double uv_cutoff() const { return config_.uv_cutoff; }
  int angular_order() const { return config_.angular_order; }
  int radial_order() const { return config_.radial_order; }
  std::string id() const { return config_.id(); }

  /// |integral of e^{-r} dmu - 2 pi| measured at construction.
  double self_test_error() const { return self_test_error_; }

  /// Grid with GridConfig::refined(), built once on first use and shared by
  /// copies of this grid.
  const QuadratureGrid& refined() const;

  /// One row per node: x,y,z,weight (17 significant digits).
  void write_csv(std::ostream& out) const;

 private:
  struct RefineCache;

  GridConfig config_;
  std::vector<ConePoint> nodes_;
  std::vector<double> weights_;
  double self_test_error_ = 0.0;
  std::shared_ptr<RefineCache> refine_cache_;
};

QuadratureGrid build_grid(int angular_order, int radial_order, double ir_cutoff,
                          double uv_cutoff);
QuadratureGrid build_grid(const GridConfig& config);

using ConeFunction = std::function<Complex(const ConePoint&)>;

/// Sum of weight_i f(node_i) with a deterministic reduction order. Throws
/// NumericalError naming the node if f is non-finite there.
Complex integrate(const QuadratureGrid& grid, const ConeFunction& f);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace kreinphoton
