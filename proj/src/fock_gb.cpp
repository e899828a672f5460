#include "kreinphoton/fock_gb.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>

#include "kreinphoton/errors.hpp"
#include "kreinphoton/krein_core.hpp"

namespace kreinphoton {
namespace {

constexpr double kDependenceThreshold = 1e-8;

using Samples = std::vector<Vec4c>;

Complex inner(const QuadratureGrid& grid, const Samples& a, const Samples& b) { return hilbert_sum(grid, a, b); }

Samples combine(const std::vector<Samples>& basis, const ComplexVector& c) {
  Samples out(basis.front().size(), Vec4c::Zero());
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    if (c[k] == Complex(0.0)) continue;
    const Samples& v = basis[static_cast<std::size_t>(k)];
    for (std::size_t n = 0; n < out.size(); ++n) out[n] += c[k] * v[n];
  }
  return out;
}

MomentumWaveFunction combine(const std::vector<MomentumWaveFunction>& fs, const ComplexVector& c,
                             std::string description) {
  return MomentumWaveFunction(
      [fs, c](const ConePoint& p) -> Vec4c {
        Vec4c v = Vec4c::Zero();
        for (Eigen::Index k = 0; k < c.size(); ++k) {
          if (c[k] != Complex(0.0)) v += c[k] * fs[static_cast<std::size_t>(k)](p);
        }
        return v;
      },
      std::move(description));
}

}  // namespace

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// --- ModeBasis ----------------------------------------------------------------

double ModeBasis::j_involution_residual() const {
  return max_abs(j_matrix * j_matrix - ComplexMatrix::Identity(j_matrix.rows(), j_matrix.cols()));
}

double ModeBasis::j_hermiticity_residual() const { return max_abs(j_matrix - j_matrix.adjoint()); }

MomentumWaveFunction ModeBasis::apply_j_prime(const MomentumWaveFunction& phi) {
  return MomentumWaveFunction(
      [phi](const ConePoint& p) -> Vec4c { return fundamental_symmetry(p).entries.cast<Complex>() * phi(p); },
      "J'" + phi.description());
}

ComplexVector ModeBasis::coefficients(const MomentumWaveFunction& phi, double* span_residual) const {
  const Samples s = sample(phi, *grid);
  ComplexVector c(static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < size(); ++i) c[static_cast<Eigen::Index>(i)] = inner(*grid, samples[i], s);
  if (span_residual) {
    const Samples fit = combine(samples, c);
    Samples diff(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) diff[n] = s[n] - fit[n];
    const double norm = std::sqrt(std::abs(inner(*grid, s, s)));
    const double rest = std::sqrt(std::abs(inner(*grid, diff, diff)));
    *span_residual = norm > 0.0 ? rest / norm : rest;
  }
  return c;
}

ModeBasis build_mode_basis(const std::vector<MomentumWaveFunction>& states, const QuadratureGrid& grid) {
  if (states.empty()) throw ConfigError("mode basis needs at least one state");
  ModeBasis out;
  out.grid = std::make_shared<const QuadratureGrid>(grid);

  std::vector<MomentumWaveFunction> extended = states;
  for (const auto& s : states) extended.push_back(ModeBasis::apply_j_prime(s));
  std::vector<Samples> raw;
  raw.reserve(extended.size());
  for (const auto& s : extended) raw.push_back(sample(s, grid));

  const std::size_t n_in = states.size();
  Eigen::MatrixXcd gram(n_in, n_in);
  for (std::size_t a = 0; a < n_in; ++a) {
    for (std::size_t b = 0; b < n_in; ++b) gram(a, b) = inner(grid, raw[a], raw[b]);
  }
  const Eigen::VectorXd diag = gram.diagonal().real();
  if ((diag.array() <= 0.0).any()) throw DegenerateInput("input state with zero Hilbert norm");
  const Eigen::VectorXd scale = diag.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXcd normalized = scale.asDiagonal() * gram * scale.asDiagonal();
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(normalized).eigenvalues();
  out.input_condition = ev.minCoeff() > 0.0 ? ev.maxCoeff() / ev.minCoeff()
                                            : std::numeric_limits<double>::infinity();
  if (!(out.input_condition <= kMaxGramCondition)) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "input Gram condition number %.3e exceeds %.0e", out.input_condition,
                  kMaxGramCondition);
    throw DegenerateInput(buf);
  }

  // coefficient rows of the orthonormal modes in terms of `extended`
  std::vector<ComplexVector> rows;
  for (std::size_t k = 0; k < extended.size(); ++k) {
    const double original = std::sqrt(std::abs(inner(grid, raw[k], raw[k])));
    ComplexVector c = ComplexVector::Zero(static_cast<Eigen::Index>(extended.size()));
    c[static_cast<Eigen::Index>(k)] = 1.0;
    Samples u = raw[k];
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t m = 0; m < out.samples.size(); ++m) {
        const Complex proj = inner(grid, out.samples[m], u);
        for (std::size_t n = 0; n < u.size(); ++n) u[n] -= proj * out.samples[m][n];
        c -= proj * rows[m];
      }
    }
    const double norm = std::sqrt(std::abs(inner(grid, u, u)));
    if (norm <= kDependenceThreshold * original) continue;
    for (auto& v : u) v /= norm;
    c /= norm;
    rows.push_back(c);
    out.samples.push_back(std::move(u));
    out.modes.push_back(combine(extended, c, "mode" + std::to_string(out.modes.size())));
  }

  const std::size_t m = out.samples.size();
  out.j_matrix.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
      out.gram_residual =
          std::max(out.gram_residual, std::abs(inner(grid, out.samples[a], out.samples[b]) - (a == b ? 1.0 : 0.0)));
      out.j_matrix(ia, ib) = krein_sum(grid, out.samples[a], out.samples[b]);
    }
  }
  return out;
}

// --- FockSector ---------------------------------------------------------------

FockSector::FockSector(std::shared_ptr<const ModeBasis> basis, int cutoff)
    : basis_(std::move(basis)), modes_(basis_ ? basis_->size() : 0), cutoff_(cutoff) {
  if (!basis_) throw ConfigError("null mode basis");
  j_ = basis_->j_matrix;
  enumerate();
}

FockSector::FockSector(std::size_t modes, int cutoff) : modes_(modes), cutoff_(cutoff) {
  j_ = ComplexMatrix::Identity(static_cast<Eigen::Index>(modes), static_cast<Eigen::Index>(modes));
  enumerate();
}

void FockSector::enumerate() {
  if (modes_ == 0) throw ConfigError("Fock sector needs at least one mode");
  if (cutoff_ < 1) throw ConfigError("particle cutoff must be at least 1");
  std::vector<int> occ(modes_, 0);
  for (int n = 0; n <= cutoff_; ++n) {
    // compositions of n into modes_ parts, in lexicographically decreasing order
    std::function<void(std::size_t, int)> rec = [&](std::size_t slot, int remaining) {
      if (slot + 1 == modes_) {
        occ[slot] = remaining;
        index_[occ] = occupations_.size();
        occupations_.push_back(occ);
        return;
      }
      for (int k = remaining; k >= 0; --k) {
        occ[slot] = k;
        rec(slot + 1, remaining - k);
      }
    };
    rec(0, n);
  }
}

int FockSector::total(std::size_t index) const {
  int t = 0;
  for (int v : occupations_.at(index)) t += v;
  return t;
}

std::size_t FockSector::index_of(const std::vector<int>& occupation) const {
  const auto it = index_.find(occupation);
  if (it == index_.end()) throw ConfigError("occupation outside the truncated sector");
  return it->second;
}

ComplexVector FockSector::vacuum() const {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dimension()));
  v[0] = 1.0;
  return v;
}

const ModeBasis& FockSector::basis() const {
  if (!basis_) throw ConfigError("bare Fock sector has no mode basis");
  return *basis_;
}

FockOperator FockSector::creation(std::size_t i) const {
  if (i >= modes_) throw ConfigError("mode index out of range");
  const auto d = static_cast<Eigen::Index>(dimension());
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (std::size_t col = 0; col < dimension(); ++col) {
    std::vector<int> occ = occupations_[col];
    if (total(col) == cutoff_) continue;
    const double factor = std::sqrt(static_cast<double>(occ[i] + 1));
    occ[i] += 1;
    m(static_cast<Eigen::Index>(index_of(occ)), static_cast<Eigen::Index>(col)) = factor;
  }
  return {std::move(m), "a+(" + std::to_string(i) + ")"};
}

FockOperator FockSector::annihilation(std::size_t i) const {
  FockOperator a = creation(i);
  a.matrix.adjointInPlace();
  a.label = "a(" + std::to_string(i) + ")";
  return a;
}

FockOperator FockSector::creation(const ComplexVector& c) const {
  if (static_cast<std::size_t>(c.size()) != modes_) throw ConfigError("coefficient count mismatch");
  const auto d = static_cast<Eigen::Index>(dimension());
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < modes_; ++i) m += c[static_cast<Eigen::Index>(i)] * creation(i).matrix;
  return {std::move(m), "a+(c)"};
}

FockOperator FockSector::annihilation(const ComplexVector& c) const {
  FockOperator a = creation(c);
  a.matrix.adjointInPlace();
  a.label = "a(c)";
  return a;
}

// --- eta, fields, commutators -------------------------------------------------

FockOperator gupta_bleuler_eta(const FockSector& sector) {
  const auto d = static_cast<Eigen::Index>(sector.dimension());
  const auto m = static_cast<Eigen::Index>(sector.modes());
  std::vector<ComplexMatrix> lifted;
  for (Eigen::Index i = 0; i < m; ++i) lifted.push_back(sector.creation(sector.j_matrix().col(i)).matrix);

  ComplexMatrix eta(d, d);
  for (std::size_t col = 0; col < sector.dimension(); ++col) {
    ComplexVector v = sector.vacuum();
    const auto& occ = sector.occupations()[col];
    for (std::size_t i = 0; i < occ.size(); ++i) {
      for (int k = 1; k <= occ[i]; ++k) v = lifted[i] * v / std::sqrt(static_cast<double>(k));
    }
    eta.col(static_cast<Eigen::Index>(col)) = v;
  }
  const double defect = max_abs(eta * eta - ComplexMatrix::Identity(d, d));
  if (defect > kInvolutionBreakLimit) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "|eta^2 - I| = %.3e", defect);
    throw InvolutionBroken(buf);
  }
  return {std::move(eta), "eta"};
}

FieldOperator field_operator(const TestFunction& phi, const FockSector& sector, const FockOperator& eta,
                             double max_span_residual) {
  FieldOperator out;
  out.coefficients = sector.basis().coefficients(cone_wavefunction(phi), &out.span_residual);
  if (out.span_residual > max_span_residual) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s leaves the mode span with relative residual %.3e > %.1e",
                  phi.name().c_str(), out.span_residual, max_span_residual);
    throw SpanResidualTooLarge(buf);
  }
  out.op.matrix = sector.annihilation(out.coefficients).matrix +
                  eta.matrix * sector.creation(out.coefficients).matrix * eta.matrix;
  out.op.label = "A(" + phi.name() + ")";
  return out;
}

CommutatorCheck commutator_check(const TestFunction& f, const TestFunction& g, const FockSector& sector,
                                 const FockOperator& eta, double max_span_residual) {
  const FieldOperator af = field_operator(f, sector, eta, max_span_residual);
  const FieldOperator ag = field_operator(g, sector, eta, max_span_residual);
  const ComplexMatrix c = af.op.matrix * ag.op.matrix - ag.op.matrix * af.op.matrix;

  CommutatorCheck out;
  out.span_residual = std::max(af.span_residual, ag.span_residual);
  out.cnumber = c(0, 0);
  for (std::size_t col = 0; col < sector.dimension(); ++col) {
    if (sector.total(col) >= sector.cutoff()) continue;
    ComplexVector expected = ComplexVector::Zero(c.rows());
    expected[static_cast<Eigen::Index>(col)] = out.cnumber;
    out.matrix_residual =
        std::max(out.matrix_residual, (c.col(static_cast<Eigen::Index>(col)) - expected).cwiseAbs().maxCoeff());
  }
  const ComplexMatrix& j = sector.j_matrix();
  out.oracle_value = af.coefficients.dot(j * ag.coefficients) - ag.coefficients.dot(j * af.coefficients);

  const QuadratureGrid& grid = *sector.basis().grid;
  const Samples sf = sample(cone_wavefunction(f), grid);
  const Samples sg = sample(cone_wavefunction(g), grid);
  out.pauli_jordan = krein_sum(grid, sf, sg) - krein_sum(grid, sg, sf);
  return out;
}

double krein_expectation(const FockOperator& eta, const ComplexVector& psi) {
  return psi.dot(eta.matrix * psi).real() / psi.squaredNorm();
}

}  // namespace kreinphoton
