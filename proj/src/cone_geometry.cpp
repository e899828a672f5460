#include "kreinphoton/cone_geometry.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

#include "kreinphoton/errors.hpp"
#include "kreinphoton/parallel.hpp"

namespace kreinphoton {
namespace {

using std::numbers::pi;

std::string format_vec(const Vec3& v) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "(%.17g, %.17g, %.17g)", v[0], v[1], v[2]);
  return buf;
}

const std::array<Eigen::Matrix2cd, 4>& pauli() {
  static const std::array<Eigen::Matrix2cd, 4> sigma = [] {
    const Complex i{0.0, 1.0};
    std::array<Eigen::Matrix2cd, 4> s;
    s[0] << 1, 0, 0, 1;
    s[1] << 0, 1, 1, 0;
    s[2] << 0, -i, i, 0;
    s[3] << 1, 0, 0, -1;
    return s;
  }();
  return sigma;
}

Eigen::Matrix2cd n_dot_sigma(const Vec3& n) {
  const auto& s = pauli();
  return n[0] * s[1] + n[1] * s[2] + n[2] * s[3];
}

Vec3 unit_axis(const Vec3& axis) {
  const double norm = axis.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ConfigError("axis must be a finite non-zero vector");
  }
  return axis / norm;
}

}  // namespace

ConePoint::ConePoint(const Vec3& spatial) : spatial_(spatial), r_(spatial.norm()) {
  if (!(r_ > 0.0)) {
    if (std::isnan(r_)) throw NumericalError("non-finite momentum " + format_vec(spatial));
    throw ApexExcluded("the cone apex p = 0 is not a valid point");
  }
}

ConePoint ConePoint::spherical(double r, double cos_theta, double phi) {
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  return ConePoint(Vec3(r * sin_theta * std::cos(phi), r * sin_theta * std::sin(phi), r * cos_theta));
}

Vec4 ConePoint::four_momentum() const { return Vec4(r_, spatial_[0], spatial_[1], spatial_[2]); }

ConePoint cone_point(const Vec3& spatial) { return ConePoint(spatial); }

double measure_weight(const ConePoint& p) { return 0.5 / p.r(); }

double minkowski_dot(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

const Mat4& minkowski_metric() {
  static const Mat4 g = Vec4(1.0, -1.0, -1.0, -1.0).asDiagonal();
  return g;
}

// --- SL(2,C) ---------------------------------------------------------------

SL2C::SL2C(const Matrix& m) : m_(m) {
  const Complex det = m.determinant();
  if (!(std::abs(det - 1.0) <= kDeterminantTolerance)) {
    std::ostringstream os;
    os << "determinant " << det << " differs from 1";
    throw InvalidSpinor(os.str());
  }
}

SL2C SL2C::identity() { return SL2C(Matrix::Identity()); }

SL2C SL2C::boost(const Vec3& axis, double rapidity) {
  const Vec3 n = unit_axis(axis);
  return SL2C(std::cosh(0.5 * rapidity) * Matrix::Identity() +
              std::sinh(0.5 * rapidity) * n_dot_sigma(n));
}

SL2C SL2C::rotation(const Vec3& axis, double angle) {
  const Vec3 n = unit_axis(axis);
  const Complex i{0.0, 1.0};
  return SL2C(std::cos(0.5 * angle) * Matrix::Identity() +
              i * std::sin(0.5 * angle) * n_dot_sigma(n));
}

SL2C SL2C::inverse() const {
  Matrix inv;
  inv << m_(1, 1), -m_(0, 1), -m_(1, 0), m_(0, 0);
  return SL2C(inv);
}

SL2C SL2C::operator*(const SL2C& other) const {
  Matrix prod = m_ * other.m_;
  // Renormalize rounding drift so long products stay unimodular.
  prod /= std::sqrt(prod.determinant());
  return SL2C(prod);
}

// --- Lorentz matrices -----------------------------------------------------

LorentzMatrix::LorentzMatrix(const Mat4& m) : m_(m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double defect = metric_defect();
  if (!(defect <= kMetricTolerance * scale * scale)) {
    throw NumericalError("matrix does not preserve the Minkowski metric (defect " +
                         std::to_string(defect) + ")");
  }
  if (!(m(0, 0) >= 1.0 - kMetricTolerance * scale)) {
    throw NumericalError("Lorentz matrix is not orthochronous");
  }
  if (!(m.determinant() > 0.0)) {
    throw NumericalError("Lorentz matrix is not proper");
  }
}

LorentzMatrix LorentzMatrix::identity() { return LorentzMatrix(Mat4::Identity(), Unchecked{}); }

LorentzMatrix LorentzMatrix::inverse() const {
  const Mat4& g = minkowski_metric();
  return LorentzMatrix(g * m_.transpose() * g, Unchecked{});
}

LorentzMatrix LorentzMatrix::operator*(const LorentzMatrix& other) const {
  return LorentzMatrix(m_ * other.m_, Unchecked{});
}

double LorentzMatrix::metric_defect() const {
  const Mat4& g = minkowski_metric();
  return (m_.transpose() * g * m_ - g).cwiseAbs().maxCoeff();
}

LorentzMatrix spinor_to_lorentz(const SL2C& alpha) {
  const auto& s = pauli();
  const Eigen::Matrix2cd& a = alpha.matrix();
  const Eigen::Matrix2cd a_dag = a.adjoint();
  Mat4 lambda;
  for (int nu = 0; nu < 4; ++nu) {
    const Eigen::Matrix2cd image = a_dag * s[nu] * a;
    for (int mu = 0; mu < 4; ++mu) {
      lambda(mu, nu) = 0.5 * (s[mu] * image).trace().real();
    }
  }
  return LorentzMatrix(lambda);
}

ConePoint lorentz_act_point(const LorentzMatrix& lambda, const ConePoint& p) {
  const Vec4 image = lambda.apply(p.four_momentum());
  const Vec3 spatial = image.tail<3>();
  if (!(spatial.norm() >= 1e-300)) {
    throw ApexExcluded("Lorentz image of " + format_vec(p.spatial()) + " collapsed to the apex");
  }
  return ConePoint(spatial);
}

// --- Quadrature -----------------------------------------------------------

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order < 1) throw ConfigError("Gauss-Legendre order must be positive");
  nodes.assign(static_cast<std::size_t>(order), 0.0);
  weights.assign(static_cast<std::size_t>(order), 0.0);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      // p1 = P_n(x), p0 = P_{n-1}(x)
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(order - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(order - 1 - i)] = w;
  }
  if (order % 2 == 1) nodes[static_cast<std::size_t>(order / 2)] = 0.0;
}

void GridConfig::validate() const {
  if (angular_order < 2 || radial_order < 2) {
    throw ConfigError("quadrature orders must be at least 2");
  }
  if (!(ir_cutoff > 0.0) || !(uv_cutoff > ir_cutoff) || !std::isfinite(uv_cutoff)) {
    throw ConfigError("cutoffs must satisfy 0 < ir_cutoff < uv_cutoff < inf");
  }
  if (!(radial_shift >= 0.0) || !std::isfinite(radial_shift)) {
    throw ConfigError("radial_shift must be finite and non-negative");
  }
  if (self_test_tolerance && !(*self_test_tolerance > 0.0)) {
    throw ConfigError("self_test_tolerance must be positive");
  }
}

GridConfig GridConfig::refined() const {
  GridConfig r = *this;
  r.angular_order *= 2;
  r.radial_order *= 2;
  r.uv_cutoff *= 2.0;
  return r;
}

std::string GridConfig::id() const {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "a%d-r%d-ir%.6g-uv%.6g-s%.6g", angular_order, radial_order,
                ir_cutoff, uv_cutoff, radial_shift);
  return buf;
}

struct QuadratureGrid::RefineCache {
  std::once_flag once;
  std::unique_ptr<QuadratureGrid> grid;
};

QuadratureGrid::QuadratureGrid(GridConfig config)
    : config_(std::move(config)), refine_cache_(std::make_shared<RefineCache>()) {
  config_.validate();

  std::vector<double> xr, wr, xc, wc;
  gauss_legendre(config_.radial_order, xr, wr);
  gauss_legendre(config_.angular_order, xc, wc);

  const double s = config_.radial_shift;
  const double t_lo = std::log(config_.ir_cutoff + s);
  const double t_hi = std::log(config_.uv_cutoff + s);
  const double t_half = 0.5 * (t_hi - t_lo);
  const int n_phi = 2 * config_.angular_order;
  const double d_phi = 2.0 * pi / n_phi;

  nodes_.reserve(xr.size() * xc.size() * static_cast<std::size_t>(n_phi));
  weights_.reserve(nodes_.capacity());
  for (std::size_t i = 0; i < xr.size(); ++i) {
    const double t = t_lo + t_half * (xr[i] + 1.0);
    const double r = std::clamp(std::exp(t) - s, config_.ir_cutoff, config_.uv_cutoff);
    // dr = (r + s) dt; density r^2 / (2 r) = r / 2.
    const double radial_weight = wr[i] * t_half * (r + s) * 0.5 * r;
    for (std::size_t j = 0; j < xc.size(); ++j) {
      for (int k = 0; k < n_phi; ++k) {
        const double phi = (k + 0.5) * d_phi;
        nodes_.push_back(ConePoint::spherical(r, xc[j], phi));
        weights_.push_back(radial_weight * wc[j] * d_phi);
      }
    }
  }

  double acc = 0.0;
  std::vector<double> terms(nodes_.size());
  for (std::size_t n = 0; n < nodes_.size(); ++n) terms[n] = weights_[n] * std::exp(-nodes_[n].r());
  acc = pairwise_sum(terms);
  self_test_error_ = std::abs(acc - 2.0 * pi);
  if (config_.self_test_tolerance && !(self_test_error_ <= *config_.self_test_tolerance)) {
    throw ConfigError("grid " + config_.id() + " fails the e^{-r} self-test (error " +
                      std::to_string(self_test_error_) + ")");
  }
}

const QuadratureGrid& QuadratureGrid::refined() const {
  std::call_once(refine_cache_->once, [this] {
    refine_cache_->grid = std::make_unique<QuadratureGrid>(config_.refined());
  });
  return *refine_cache_->grid;
}

void QuadratureGrid::write_csv(std::ostream& out) const {
  out << "x,y,z,weight\n";
  char buf[160];
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    const Vec3& v = nodes_[n].spatial();
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", v[0], v[1], v[2], weights_[n]);
    out << buf;
  }
}

QuadratureGrid build_grid(int angular_order, int radial_order, double ir_cutoff,
                          double uv_cutoff) {
  GridConfig c;
  c.angular_order = angular_order;
  c.radial_order = radial_order;
  c.ir_cutoff = ir_cutoff;
  c.uv_cutoff = uv_cutoff;
  return QuadratureGrid(c);
}

QuadratureGrid build_grid(const GridConfig& config) { return QuadratureGrid(config); }

Complex integrate(const QuadratureGrid& grid, const ConeFunction& f) {
  const auto& nodes = grid.nodes();
  const auto& weights = grid.weights();
  std::vector<Complex> terms(nodes.size());
  parallel_for_chunks(nodes.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      const Complex v = f(nodes[n]);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NumericalError("non-finite integrand at node " + format_vec(nodes[n].spatial()));
      }
      terms[n] = weights[n] * v;
    }
  });
  return pairwise_sum(terms);
}

}  // namespace kreinphoton
