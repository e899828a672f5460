#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "kreinphoton/errors.hpp"
#include "kreinphoton/fock_gb.hpp"
#include "kreinphoton/krein_core.hpp"
#include "kreinphoton/profiles.hpp"
#include "oracles.hpp"

using namespace kreinphoton;

namespace {

const QuadratureGrid& grid() {
  static const QuadratureGrid g = [] {
    GridConfig c;
    c.angular_order = 12;
    c.radial_order = 32;
    c.uv_cutoff = 40.0;
    c.self_test_tolerance.reset();
    return QuadratureGrid(c);
  }();
  return g;
}

ComplexMatrix identity(const FockSector& s) {
  const auto d = static_cast<Eigen::Index>(s.dimension());
  return ComplexMatrix::Identity(d, d);
}

ComplexVector random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexVector v(n);
  for (auto& x : v) x = Complex(g(rng), g(rng));
  return v;
}

// k -> w(k_spatial) f(k), a transversal vector test function on R^4
TestFunction transversal_test_function(EigenMode mode, const std::string& profile) {
  const TestFunction f = library_test_function(profile);
  return TestFunction(
      4, 4,
      [f, mode](const EuclideanPoint& k) -> Vec4c {
        const Vec3 s(k[1], k[2], k[3]);
        if (s.norm() == 0.0) return Vec4c::Zero();
        return eigenvector(ConePoint(s), mode).cast<Complex>() * f(k)[0];
      },
      "w*" + profile);
}

// independent construction of Gamma(j): act with j (x) ... (x) j on symmetric
// tensors and read back the occupation-basis coefficients
ComplexMatrix tensor_eta(const FockSector& s) {
  const auto m = static_cast<Eigen::Index>(s.modes());
  const ComplexMatrix& j = s.j_matrix();
  const auto d = static_cast<Eigen::Index>(s.dimension());
  ComplexMatrix eta = ComplexMatrix::Zero(d, d);
  // normalized symmetric tensor of an occupation, as a vector over C^{m^n}
  auto tensor = [&](const std::vector<int>& occ) {
    std::vector<Eigen::Index> slots;
    for (Eigen::Index i = 0; i < m; ++i) {
      for (int k = 0; k < occ[static_cast<std::size_t>(i)]; ++k) slots.push_back(i);
    }
    const std::size_t n = slots.size();
    Eigen::Index size = 1;
    for (std::size_t k = 0; k < n; ++k) size *= m;
    ComplexVector t = ComplexVector::Zero(size);
    std::sort(slots.begin(), slots.end());
    double count = 0;
    do {
      Eigen::Index idx = 0;
      for (auto v : slots) idx = idx * m + v;
      t[idx] += 1.0;
      count += 1;
    } while (std::next_permutation(slots.begin(), slots.end()));
    return ComplexVector(t / t.norm());
  };
  for (std::size_t col = 0; col < s.dimension(); ++col) {
    const auto& occ = s.occupations()[col];
    const int n = s.total(col);
    ComplexMatrix jn = ComplexMatrix::Identity(1, 1);
    for (int k = 0; k < n; ++k) jn = Eigen::kroneckerProduct(jn, j).eval();
    const ComplexVector image = jn * tensor(occ);
    for (std::size_t row = 0; row < s.dimension(); ++row) {
      if (s.total(row) != n) continue;
      eta(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = tensor(s.occupations()[row]).dot(image);
    }
  }
  return eta;
}

}  // namespace

TEST_CASE("ladder algebra on a bare sector") {
  const FockSector s(3, 2);
  CHECK(s.dimension() == 10);
  CHECK(FockSector(4, 3).dimension() == 35);
  CHECK(s.total(s.vacuum_index()) == 0);
  int vacua = 0;
  for (std::size_t i = 0; i < s.dimension(); ++i) vacua += s.total(i) == 0;
  CHECK(vacua == 1);

  for (std::size_t i = 0; i < 3; ++i) {
    CHECK((s.annihilation(i).matrix * s.vacuum()).norm() == 0.0);
    const ComplexMatrix number = s.creation(i).matrix * s.annihilation(i).matrix;
    for (std::size_t k = 0; k < s.dimension(); ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      CHECK(std::abs(number(kk, kk) - Complex(s.occupations()[k][i])) < 1e-15);
    }
    CHECK(max_abs(number - ComplexMatrix(number.diagonal().asDiagonal())) == 0.0);
    for (std::size_t j = 0; j < 3; ++j) {
      const ComplexMatrix c = s.annihilation(i).matrix * s.creation(j).matrix -
                              s.creation(j).matrix * s.annihilation(i).matrix;
      for (std::size_t col = 0; col < s.dimension(); ++col) {
        if (s.total(col) >= s.cutoff()) continue;
        ComplexVector expected = ComplexVector::Zero(c.rows());
        if (i == j) expected[static_cast<Eigen::Index>(col)] = 1.0;
        CHECK((c.col(static_cast<Eigen::Index>(col)) - expected).norm() < 1e-12);
      }
    }
    CHECK(max_abs(s.annihilation(i).matrix - s.creation(i).matrix.adjoint()) == 0.0);
  }
  CHECK_THROWS_AS(s.creation(3), ConfigError);
  CHECK(max_abs(gupta_bleuler_eta(s).matrix - identity(s)) == 0.0);
}

TEST_CASE("mode basis examples") {
  const Envelope g(EnvelopeKind::exp_ir);
  const ModeBasis single = build_mode_basis({polarized(Polarization::transverse_plus, g)}, grid());
  CHECK(single.size() == 1);
  CHECK(std::abs(single.j_matrix(0, 0) - 1.0) < 1e-12);
  CHECK(single.gram_residual < 1e-12);
  const FockSector one(std::make_shared<const ModeBasis>(single), 3);
  CHECK(max_abs(gupta_bleuler_eta(one).matrix - identity(one)) < 1e-12);

  // w_{r^-2} g and w_{r^2} r^-2 g are exchanged by J' up to sign
  const auto wm = polarized(Polarization::gauge_inverse_square, g);
  const auto wp = polarized(
      Polarization::gauge_square, [g](const ConePoint& p) { return Complex(g(p) / (p.r() * p.r())); }, "r^-2 g");
  const ModeBasis closed = build_mode_basis({wm, wp}, grid());
  REQUIRE(closed.size() == 2);
  Eigen::Matrix2cd expected;
  expected << 0, -1, -1, 0;
  CHECK(max_abs(closed.j_matrix - expected) < 1e-10);

  // with equal envelopes the J' images are new directions
  const ModeBasis spec_pair = build_mode_basis({wm, polarized(Polarization::gauge_square, g)}, grid());
  CHECK(spec_pair.size() == 4);
  CHECK(spec_pair.j_involution_residual() < 5e-8);
  CHECK(spec_pair.j_hermiticity_residual() < 5e-8);
  CHECK(spec_pair.gram_residual < 1e-8);

  CHECK_THROWS_AS(build_mode_basis({}, grid()), ConfigError);
  CHECK_THROWS_AS(build_mode_basis({wm, Complex(2.0) * wm}, grid()), DegenerateInput);
  CHECK_THROWS_AS(build_mode_basis({MomentumWaveFunction()}, grid()), DegenerateInput);
}

TEST_CASE("Gupta-Bleuler operator") {
  std::mt19937_64 rng(1);
  const auto states = std::vector<MomentumWaveFunction>{
      parse_state("w1p:exp_ir + 0.3i*wrm2:gauss_ir"), parse_state("e0:gauss_ir@1.3 + -0.5*w1m:aniso_ir"),
  };
  const auto basis = std::make_shared<const ModeBasis>(build_mode_basis(states, grid()));
  REQUIRE(basis->size() == 4);
  CHECK(basis->j_involution_residual() < 5e-8);
  const FockSector s(basis, 2);
  const FockOperator eta = gupta_bleuler_eta(s);
  CHECK(max_abs(eta.matrix * eta.matrix - identity(s)) < 1e-7);
  CHECK(max_abs(eta.matrix - eta.matrix.adjoint()) < 1e-7);
  CHECK((eta.matrix * s.vacuum() - s.vacuum()).norm() < 1e-15);
  CHECK(max_abs(eta.matrix - tensor_eta(s)) < 1e-12);

  for (int trial = 0; trial < 5; ++trial) {
    const ComplexVector c = random_vector(rng, 4);
    const ComplexMatrix lhs = eta.matrix * s.creation(c).matrix * eta.matrix;
    CHECK(max_abs(lhs - s.creation(s.j_matrix() * c).matrix) < 1e-7);
    // same through J' applied pointwise and re-expanded
    const MomentumWaveFunction phi = [&] {
      MomentumWaveFunction sum;
      for (std::size_t i = 0; i < 4; ++i) sum = sum + c[static_cast<Eigen::Index>(i)] * basis->modes[i];
      return sum;
    }();
    double residual = 1.0;
    const ComplexVector jc = basis->coefficients(ModeBasis::apply_j_prime(phi), &residual);
    CHECK(residual < 1e-6);
    CHECK(max_abs(lhs - s.creation(jc).matrix) < 1e-7);
  }
}

TEST_CASE("field operators and the commutator") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 0.6);
  const TestFunction f = vector_test_function("s0_gauss", Vec4c(1.0, 0.0, 0.0, 0.5))
                             .translated(Vec4(n(rng), n(rng), n(rng), n(rng)));
  const TestFunction g = vector_test_function("s0_shell", Vec4c(0.0, 0.3, 0.0, 1.0))
                             .translated(Vec4(n(rng), n(rng), n(rng), n(rng)));
  const auto basis = std::make_shared<const ModeBasis>(
      build_mode_basis({cone_wavefunction(f), cone_wavefunction(g)}, grid()));
  const FockSector s(basis, 2);
  const FockOperator eta = gupta_bleuler_eta(s);

  const FieldOperator af = field_operator(f, s, eta);
  CHECK(af.span_residual < 1e-10);
  // f restricts to a multiple of the first mode
  CHECK(af.coefficients.tail(af.coefficients.size() - 1).norm() < 1e-10 * std::abs(af.coefficients[0]));
  const Complex c0 = af.coefficients[0];
  CHECK(max_abs(af.op.matrix - (std::conj(c0) * s.annihilation(0).matrix +
                                eta.matrix * (c0 * s.creation(0).matrix) * eta.matrix)) < 1e-12);
  CHECK(max_abs(eta.matrix * af.op.matrix.adjoint() * eta.matrix - af.op.matrix) < 1e-7);
  const ComplexVector one_particle = af.op.matrix * s.vacuum();
  for (std::size_t k = 0; k < s.dimension(); ++k) {
    if (s.total(k) != 1) CHECK(std::abs(one_particle[static_cast<Eigen::Index>(k)]) == 0.0);
  }

  const CommutatorCheck same = commutator_check(f, f, s, eta);
  CHECK(std::abs(same.cnumber) < 1e-14);
  const CommutatorCheck fg = commutator_check(f, g, s, eta);
  const CommutatorCheck gf = commutator_check(g, f, s, eta);
  CHECK(std::abs(fg.cnumber) > 1e-3);
  CHECK(std::abs(fg.cnumber.real()) < 1e-10);
  CHECK(fg.matrix_residual < 1e-7);
  CHECK(std::abs(fg.cnumber - fg.oracle_value) < 1e-7);
  CHECK(std::abs(fg.cnumber - fg.pauli_jordan) < 1e-7);
  CHECK(std::abs(fg.cnumber + gf.cnumber) < 1e-10);

  const TestFunction outside = vector_test_function("s0_poly", Vec4c(0.0, 0.0, 1.0, 0.0));
  CHECK_THROWS_AS(field_operator(outside, s, eta), SpanResidualTooLarge);
  CHECK_NOTHROW(field_operator(outside, s, eta, 2.0));
}

TEST_CASE("physical sector positivity") {
  std::mt19937_64 rng(3);
  const TestFunction f = transversal_test_function(EigenMode::transverse_plus, "s0_gauss");
  const TestFunction g = transversal_test_function(EigenMode::transverse_minus, "s0_shell");
  const auto basis = std::make_shared<const ModeBasis>(
      build_mode_basis({cone_wavefunction(f), cone_wavefunction(g)}, grid()));
  REQUIRE(basis->size() == 2);
  const FockSector s(basis, 3);
  const FockOperator eta = gupta_bleuler_eta(s);
  const ComplexMatrix af = field_operator(f, s, eta).op.matrix;
  const ComplexMatrix ag = field_operator(g, s, eta).op.matrix;
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    ComplexVector psi = Complex(n(rng), n(rng)) * s.vacuum();
    ComplexVector layer = s.vacuum();
    for (int degree = 1; degree <= 3; ++degree) {
      layer = (Complex(n(rng), n(rng)) * af + Complex(n(rng), n(rng)) * ag) * layer;
      psi += layer;
    }
    CHECK(krein_expectation(eta, psi) >= -1e-8);
  }
}
