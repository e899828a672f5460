#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "kreinphoton/cone_geometry.hpp"
#include "kreinphoton/errors.hpp"
#include "kreinphoton/parallel.hpp"
#include "oracles.hpp"

using namespace kreinphoton;
using std::numbers::pi;

namespace {

GridConfig coarse(int angular, int radial) {
  GridConfig c;
  c.angular_order = angular;
  c.radial_order = radial;
  c.self_test_tolerance.reset();
  return c;
}

double max_abs(const Mat4& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("cone points derive p0 from the spatial momentum") {
  CHECK(cone_point(Vec3(0, 0, 1)).p0() == 1.0);
  CHECK(cone_point(Vec3(3, 4, 0)).p0() == 5.0);
  CHECK(cone_point(Vec3(3, 4, 0)).r() == 5.0);
  CHECK_THROWS_AS(cone_point(Vec3(0, 0, 0)), ApexExcluded);
  const Vec4 k = cone_point(Vec3(1, 2, 2)).four_momentum();
  CHECK(k == Vec4(3, 1, 2, 2));
  CHECK(std::abs(minkowski_dot(k, k)) < 1e-15);
}

TEST_CASE("invariant measure density") {
  CHECK(measure_weight(cone_point(Vec3(0, 2, 0))) == 0.25);
  CHECK(measure_weight(cone_point(Vec3(1, 0, 0))) == 0.5);
  CHECK(measure_weight(cone_point(Vec3(0, 0, 0.1))) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("Gauss-Legendre rule is exact to degree 2n-1") {
  for (int n : {2, 5, 16, 33}) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += w[static_cast<std::size_t>(i)] * std::pow(x[static_cast<std::size_t>(i)], deg);
      const double exact = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("grid integrates analytic radial profiles") {
  const QuadratureGrid grid = build_grid(4, 32, 1e-5, 50.0);
  // 2 pi * int r e^{-r} dr = 2 pi; 2 pi * int r^2 e^{-r} dr = 4 pi
  CHECK(std::abs(integrate(grid, [](const ConePoint& p) { return Complex(std::exp(-p.r())); }) - 2 * pi) < 1e-8);
  CHECK(std::abs(integrate(grid, [](const ConePoint& p) { return Complex(p.r() * std::exp(-p.r())); }) - 4 * pi) < 1e-8);
  CHECK(integrate(grid, [](const ConePoint&) { return Complex(0.0); }) == Complex(0.0));
  CHECK(grid.self_test_error() < 1e-8);
}

TEST_CASE("grid nodes respect the cutoffs and carry positive weights") {
  const QuadratureGrid grid = build_grid(coarse(6, 8));
  REQUIRE(grid.size() == 8u * 6u * 12u);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    CHECK(grid.weights()[n] > 0.0);
    CHECK(grid.nodes()[n].r() >= grid.ir_cutoff());
    CHECK(grid.nodes()[n].r() <= grid.uv_cutoff());
  }
}

TEST_CASE("angular rule integrates low-degree polynomials on the sphere") {
  const QuadratureGrid grid = build_grid(coarse(8, 48));
  // int (p3/r)^2 e^{-r} dmu = 2 pi / 3; odd moments vanish
  const Complex even = integrate(grid, [](const ConePoint& p) {
    const double c = p[2] / p.r();
    return Complex(c * c * std::exp(-p.r()));
  });
  const Complex odd = integrate(grid, [](const ConePoint& p) {
    return Complex(p[0] * p[1] * p[1] / (p.r() * p.r() * p.r()) * std::exp(-p.r()));
  });
  CHECK(std::abs(even - 2 * pi / 3) < 1e-9);
  CHECK(std::abs(odd) < 1e-12);
}

TEST_CASE("relative quadrature error shrinks as the radial order doubles") {
  double previous = 1.0;
  for (int order : {4, 8, 16, 32}) {
    const QuadratureGrid grid = build_grid(coarse(2, order));
    const double err = std::abs(integrate(grid, [](const ConePoint& p) { return Complex(std::exp(-p.r())); }) - 2 * pi) / (2 * pi);
    // floor: the ir cutoff removes 2 pi * 1e-10 / 2 of the integral
    if (previous > 1e-9) CHECK(err <= 0.5 * previous);
    previous = err;
  }
}

TEST_CASE("invalid grid configurations are rejected") {
  CHECK_THROWS_AS(build_grid(1, 32, 1e-5, 50), ConfigError);
  CHECK_THROWS_AS(build_grid(8, 1, 1e-5, 50), ConfigError);
  CHECK_THROWS_AS(build_grid(8, 32, 0.0, 50), ConfigError);
  CHECK_THROWS_AS(build_grid(8, 32, 60.0, 50), ConfigError);
  // a too-coarse grid fails its own self-test
  CHECK_THROWS_AS(build_grid(2, 3, 1e-5, 50), ConfigError);
}

TEST_CASE("refined grid doubles orders and the uv cutoff") {
  const QuadratureGrid grid = build_grid(coarse(4, 8));
  const QuadratureGrid& fine = grid.refined();
  CHECK(fine.angular_order() == 8);
  CHECK(fine.radial_order() == 16);
  CHECK(fine.uv_cutoff() == 2 * grid.uv_cutoff());
  CHECK(fine.ir_cutoff() == grid.ir_cutoff());
  CHECK(&grid.refined() == &fine);
  const QuadratureGrid copy = grid;
  CHECK(&copy.refined() == &fine);
}

TEST_CASE("integrate reports non-finite integrands with the node location") {
  const QuadratureGrid grid = build_grid(coarse(2, 4));
  try {
    integrate(grid, [](const ConePoint&) { return Complex(std::nan("")); });
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("node (") != std::string::npos);
  }
}

TEST_CASE("integration is bit-reproducible across thread counts") {
  const QuadratureGrid grid = build_grid(coarse(24, 32));
  auto f = [](const ConePoint& p) { return Complex(std::exp(-p.r()) * p[2], std::sin(p[0])); };
  set_worker_threads(1);
  const Complex serial = integrate(grid, f);
  set_worker_threads(4);
  const Complex threaded = integrate(grid, f);
  set_worker_threads(0);
  CHECK(serial == threaded);
}

TEST_CASE("grid csv has one row per node") {
  const QuadratureGrid grid = build_grid(coarse(2, 2));
  std::ostringstream os;
  grid.write_csv(os);
  const std::string text = os.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(grid.size() + 1));
  CHECK(text.rfind("x,y,z,weight\n", 0) == 0);
}

TEST_CASE("spinor map: identity and z boost") {
  CHECK(max_abs(spinor_to_lorentz(SL2C::identity()).matrix() - Mat4::Identity()) == 0.0);

  Eigen::Matrix2cd diag = Eigen::Matrix2cd::Zero();
  diag(0, 0) = std::exp(0.5);
  diag(1, 1) = std::exp(-0.5);
  const LorentzMatrix boost = spinor_to_lorentz(SL2C(diag));
  CHECK(boost(0, 0) == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
  CHECK(boost(0, 3) == doctest::Approx(std::sinh(1.0)).epsilon(1e-14));
  CHECK(max_abs(boost.matrix() - spinor_to_lorentz(SL2C::boost(Vec3(0, 0, 1), 1.0)).matrix()) < 1e-14);
}

TEST_CASE("spinor map agrees with direct Pauli-matrix conjugation") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Matrix2cd a = oracle::random_unimodular(rng);
    const LorentzMatrix lambda = spinor_to_lorentz(SL2C(a));
    const Vec4 p = oracle::random_cone_point(rng, 0.1, 10).four_momentum();
    CHECK((lambda.apply(p) - oracle::pauli_conjugation(a, p)).norm() < 1e-11 * p.norm() * lambda.matrix().norm());
  }
}

TEST_CASE("spinor map is an antihomomorphism preserving the metric") {
  std::mt19937_64 rng(7);
  double worst_law = 0.0;
  double worst_metric = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const SL2C a(oracle::random_unimodular(rng));
    const SL2C b(oracle::random_unimodular(rng));
    const LorentzMatrix la = spinor_to_lorentz(a);
    const LorentzMatrix lb = spinor_to_lorentz(b);
    const LorentzMatrix lab = spinor_to_lorentz(a * b);
    worst_law = std::max(worst_law, max_abs(lab.matrix() - lb.matrix() * la.matrix()));
    worst_metric = std::max(worst_metric, lab.metric_defect());
    CHECK(lab(0, 0) >= 1.0);
    CHECK(lab.matrix().determinant() == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(worst_law < 1e-10);
  CHECK(worst_metric < 1e-10);
}

TEST_CASE("non-unimodular matrices are rejected") {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  m(0, 0) = 2.0;
  CHECK_THROWS_AS(SL2C{m}, InvalidSpinor);
  CHECK_THROWS_AS(LorentzMatrix(Mat4(Vec4(2, 1, 1, 1).asDiagonal())), NumericalError);
}

TEST_CASE("inverse spinor maps to the inverse Lorentz matrix") {
  const SL2C a = SL2C::boost(Vec3(1, 2, -1), 0.8) * SL2C::rotation(Vec3(0, 1, 1), 2.1);
  const Mat4 prod = spinor_to_lorentz(a.inverse()).matrix() * spinor_to_lorentz(a).matrix();
  CHECK(max_abs(prod - Mat4::Identity()) < 1e-13);
  CHECK(max_abs(spinor_to_lorentz(a).inverse().matrix() - spinor_to_lorentz(a.inverse()).matrix()) < 1e-13);
}

TEST_CASE("Lorentz action on cone points") {
  const ConePoint p = cone_point(Vec3(0.3, -0.2, 0.7));
  const ConePoint same = lorentz_act_point(LorentzMatrix::identity(), p);
  CHECK((same.spatial() - p.spatial()).norm() == 0.0);

  const double chi = 0.9;
  const ConePoint boosted = lorentz_act_point(spinor_to_lorentz(SL2C::boost(Vec3(0, 0, 1), chi)), cone_point(Vec3(0, 0, 1)));
  CHECK((boosted.spatial() - Vec3(0, 0, std::exp(chi))).norm() < 1e-14);

  // active right-handed rotation about z
  const double psi = 0.4;
  const ConePoint rotated = lorentz_act_point(spinor_to_lorentz(SL2C::rotation(Vec3(0, 0, 1), psi)), cone_point(Vec3(1, 0, 0)));
  CHECK((rotated.spatial() - Vec3(std::cos(psi), std::sin(psi), 0)).norm() < 1e-15);
}

TEST_CASE("Lorentz images stay on the forward cone") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const LorentzMatrix lambda = spinor_to_lorentz(SL2C(oracle::random_unimodular(rng)));
    const ConePoint p = oracle::random_cone_point(rng, 1e-3, 1e3);
    const Vec4 image = lambda.apply(p.four_momentum());
    CHECK(image[0] > 0.0);
    CHECK(std::abs(image[0] - image.tail<3>().norm()) < 1e-10 * std::max(1.0, image[0]));
    const ConePoint q = lorentz_act_point(lambda, p);
    CHECK(q.p0() == q.r());
  }
}
