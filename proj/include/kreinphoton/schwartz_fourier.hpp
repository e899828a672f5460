#pragma once

// Zero-mass test functions. S0(R^n) is the space of Schwartz functions that
// vanish at the origin together with all their derivatives; restriction to
// the cone maps S0(R^4) into S0(R^3), and the inverse Fourier image S00 is
// the position-space test space.
//
// Membership is checked up to a finite derivative order K by central finite
// differences at the origin on a stencil that is halved until the estimates
// settle. It is a surrogate for an infinite-order condition, so K and the
// tolerance are always reported.
//
// S00 contains no function of compact support: if phi had compact support
// its Fourier transform would be entire, and an entire function with all
// derivatives zero at the origin vanishes identically. For example the bump
// e^{-1/(1-|x|^2)} on the unit ball has transform equal to its (non-zero)
// integral at k = 0, so it is not in S00.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kreinphoton/cone_geometry.hpp"
#include "kreinphoton/wavefunction.hpp"

namespace kreinphoton {

/// Point of R^3 or R^4; in R^4 the first coordinate is the energy.
using EuclideanPoint = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

class TestFunction {
 public:
  using Evaluator = std::function<Vec4c(const EuclideanPoint&)>;

  /// components is 1 (value in slot 0) or 4.
  TestFunction(int dimension, int components, Evaluator evaluator, std::string name,
               int smoothness_order = 8);

  static TestFunction scalar(int dimension, std::function<Complex(const EuclideanPoint&)> f,
                             std::string name, int smoothness_order = 8);

  int dimension() const { return dimension_; }
  int components() const { return components_; }
  int smoothness_order() const { return smoothness_order_; }
  const std::string& name() const { return name_; }
  Vec4c operator()(const EuclideanPoint& x) const { return evaluator_(x); }

  TestFunction operator+(const TestFunction& other) const;
  TestFunction scaled(Complex c) const;
  /// Multiplies by e^{i a.k} (4D, signature +---) in momentum space.
  TestFunction translated(const Vec4& a) const;

 private:
  int dimension_;
  int components_;
  Evaluator evaluator_;
  std::string name_;
  int smoothness_order_;
};

struct MembershipReport {
  bool is_member = false;
  /// Largest |derivative estimate| over all components and multi-indices.
  double max_violation = 0.0;
  int order_checked = 0;
  double tolerance = 0.0;
  /// Stencil spacing at which every estimate settled.
  double final_step = 0.0;
};

/// Throws ConfigError if K exceeds the smoothness order or tol <= 0, and
/// StencilUnderflow if the spacing drops below 1e-8 without convergence.
MembershipReport s0_membership(const TestFunction& f, int order, double tol);

/// (p1, p2, p3) -> f(|p|, p1, p2, p3)
TestFunction restrict_to_cone(const TestFunction& f);

/// The restriction as a cone wavefunction (scalar functions fill slot 0).
MomentumWaveFunction cone_wavefunction(const TestFunction& f);

struct FourierReport {
  Vec4c value;
  std::string grid_id;
  double estimated_error = 0.0;
  /// estimated_error > kOscillationThreshold |value|
  bool oscillation_warning = false;
};

inline constexpr double kOscillationThreshold = 1e-4;

/// (2 pi)^{-3/2} int phi(p) e^{-i x.p} dmu(p), x.p = x0 r - x.p(spatial).
/// With strict set, an oscillation warning is thrown as OscillationWarning.
FourierReport fourier_to_position(const MomentumWaveFunction& phi, const QuadratureGrid& grid,
                                  const Vec4& x, bool strict = false);

/// Library of named test functions on R^4 (members of S0 unless stated):
///   s0_gauss   e^{-|k|^2 - 1/|k|^2}
///   s0_shell   k0 e^{-|k|^2 - 1/|k|^2}
///   s0_poly    (k0^2 + k1 k3) e^{-|k|^2/2 - 1/|k|^2}
///   gauss      e^{-|k|^2}              (not in S0)
///   quad_gauss |k|^2 e^{-|k|^2}        (not in S0: second derivatives)
/// with |k| the Euclidean norm.
TestFunction library_test_function(std::string_view name);
std::vector<std::string> library_test_function_names();
bool library_is_s0(std::string_view name);

/// Vector-valued library function polarization * library_test_function(name).
TestFunction vector_test_function(std::string_view name, const Vec4c& polarization);

/// k -> w(k_spatial) f(k) with w = w1+ (plus = true) or w1-, a transversal
/// vector test function; zero on the energy axis.
TestFunction transversal_test_function(std::string_view name, bool plus);

}  // namespace kreinphoton
