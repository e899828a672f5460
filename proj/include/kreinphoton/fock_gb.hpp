#pragma once

// Truncated second quantization over a finite set of single-photon modes.
//
// Conventions: a^+(f) = sum_i c_i a_i^+ is linear and a(f) = sum_i conj(c_i)
// a_i antilinear in the expansion coefficients c_i = (mode_i, f). With
// j_ik = <mode_i, mode_k>_K the matrix of J' on the (J'-closed) span,
//
//   eta = Gamma(J'),   eta a^+(f) eta = a^+(J' f),
//   A(f) = a(f) + eta a^+(f) eta,
//   [A(f), A(g)] = c_f^dagger j c_g - c_g^dagger j c_f = 2i Im <f, g>_K.

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kreinphoton/schwartz_fourier.hpp"
#include "kreinphoton/wavefunction.hpp"

namespace kreinphoton {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kMaxGramCondition = 1e8;

struct ModeBasis {
  std::vector<MomentumWaveFunction> modes;
  /// Mode values on the nodes of grid.
  std::vector<std::vector<Vec4c>> samples;
  std::shared_ptr<const QuadratureGrid> grid;
  /// max |Hilbert Gram - I|
  double gram_residual = 0.0;
  ComplexMatrix j_matrix;
  /// Condition number of the normalized input Gram matrix.
  double input_condition = 0.0;

  std::size_t size() const { return modes.size(); }
  double j_involution_residual() const;
  double j_hermiticity_residual() const;

  /// Hilbert coefficients (mode_i, phi) on the grid. span_residual receives
  /// |phi - sum c_i mode_i| / |phi| in the Hilbert norm.
  ComplexVector coefficients(const MomentumWaveFunction& phi, double* span_residual = nullptr) const;
  /// Pointwise J'(p) phi(p).
  static MomentumWaveFunction apply_j_prime(const MomentumWaveFunction& phi);
};

/// Closes states under J', then orthonormalizes with Gram-Schmidt in the
/// Hilbert product (J' images already in the span are dropped). Throws
/// ConfigError for an empty list and DegenerateInput if the inputs are
/// numerically dependent.
ModeBasis build_mode_basis(const std::vector<MomentumWaveFunction>& states, const QuadratureGrid& grid);

struct FockOperator {
  ComplexMatrix matrix;
  std::string label;
};

class FockSector {
 public:
  /// Sector over the modes of basis; j is the basis j_matrix.
  FockSector(std::shared_ptr<const ModeBasis> basis, int cutoff = 2);
  /// Bare sector with j = identity.
  FockSector(std::size_t modes, int cutoff = 2);

  std::size_t modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  std::size_t dimension() const { return occupations_.size(); }
  const std::vector<std::vector<int>>& occupations() const { return occupations_; }
  int total(std::size_t index) const;
  /// Throws ConfigError if the occupation is not in the sector.
  std::size_t index_of(const std::vector<int>& occupation) const;
  std::size_t vacuum_index() const { return 0; }
  ComplexVector vacuum() const;
  const ComplexMatrix& j_matrix() const { return j_; }
  /// Throws ConfigError for a bare sector.
  const ModeBasis& basis() const;

  FockOperator creation(std::size_t i) const;
  FockOperator annihilation(std::size_t i) const;
  /// sum_i c_i a_i^+
  FockOperator creation(const ComplexVector& c) const;
  /// sum_i conj(c_i) a_i
  FockOperator annihilation(const ComplexVector& c) const;

 private:
  void enumerate();

  std::shared_ptr<const ModeBasis> basis_;
  std::size_t modes_;
  int cutoff_;
  ComplexMatrix j_;
  std::vector<std::vector<int>> occupations_;
  std::map<std::vector<int>, std::size_t> index_;
};

inline constexpr double kInvolutionBreakLimit = 1e-6;

/// Gamma(j); throws InvolutionBroken if |eta^2 - I| exceeds 1e-6.
FockOperator gupta_bleuler_eta(const FockSector& sector);

inline constexpr double kDefaultSpanResidualBound = 1e-3;

struct FieldOperator {
  FockOperator op;
  ComplexVector coefficients;
  double span_residual = 0.0;
};

/// A(phi) for a vector-valued test function on R^4 restricted to the cone.
/// Throws SpanResidualTooLarge above max_span_residual.
FieldOperator field_operator(const TestFunction& phi, const FockSector& sector, const FockOperator& eta,
                             double max_span_residual = kDefaultSpanResidualBound);

struct CommutatorCheck {
  /// max deviation of [A(f), A(g)] from cnumber * I on the columns with total
  /// occupation <= N - 1
  double matrix_residual = 0.0;
  /// <vac| [A(f), A(g)] |vac>
  Complex cnumber;
  /// c_f^dagger j c_g - c_g^dagger j c_f
  Complex oracle_value;
  /// int (f^dagger BJB g - g^dagger BJB f) dmu on the grid
  Complex pauli_jordan;
  double span_residual = 0.0;
};

CommutatorCheck commutator_check(const TestFunction& f, const TestFunction& g, const FockSector& sector,
                                 const FockOperator& eta,
                                 double max_span_residual = kDefaultSpanResidualBound);

/// Re <psi | eta psi> / <psi | psi>
double krein_expectation(const FockOperator& eta, const ComplexVector& psi);

double max_abs(const ComplexMatrix& m);

}  // namespace kreinphoton
