#pragma once

// Single-photon momentum-space wavefunctions as evaluable closures, and the
// Hilbert and Krein products over the cone:
//
//   (phi, psi)   = int phi^dagger(p) B(p) psi(p) dmu(p)
//   <phi, psi>_K = (phi, J' psi) = int phi^dagger(p) B J B(p) psi(p) dmu(p)

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "kreinphoton/cone_geometry.hpp"
#include "kreinphoton/types.hpp"

namespace kreinphoton {

class MomentumWaveFunction {
 public:
  using Evaluator = std::function<Vec4c(const ConePoint&)>;

  /// The zero function.
  MomentumWaveFunction();
  MomentumWaveFunction(Evaluator evaluator, std::string description);

  Vec4c operator()(const ConePoint& p) const { return (*evaluator_)(p); }
  const std::string& description() const { return description_; }
  /// True if both wrap the same evaluator object (copies of one function).
  bool shares_evaluator(const MomentumWaveFunction& other) const { return evaluator_ == other.evaluator_; }

  /// p -> e^{i angle(p)} phi(p)
  MomentumWaveFunction with_phase(std::function<double(const ConePoint&)> angle,
                                  std::string description) const;
  /// p -> m phi(p)
  MomentumWaveFunction left_multiplied(const Mat4c& m) const;
  /// p -> outer phi(point_map p)
  MomentumWaveFunction pulled_back(const LorentzMatrix& point_map, const Mat4& outer) const;

  friend MomentumWaveFunction operator+(const MomentumWaveFunction& a, const MomentumWaveFunction& b);
  friend MomentumWaveFunction operator-(const MomentumWaveFunction& a, const MomentumWaveFunction& b);
  friend MomentumWaveFunction operator*(Complex c, const MomentumWaveFunction& a);

 private:
  std::shared_ptr<const Evaluator> evaluator_;
  std::string description_;
};

/// Values of a wavefunction at the nodes of a grid and of its refinement.
class SampledWaveFunction {
 public:
  SampledWaveFunction(const MomentumWaveFunction& phi, const QuadratureGrid& grid);

  const QuadratureGrid& grid() const { return *grid_; }
  const std::vector<Vec4c>& base() const { return base_; }
  /// Sampled on grid().refined() at first use.
  const std::vector<Vec4c>& refined() const;

 private:
  MomentumWaveFunction phi_;
  const QuadratureGrid* grid_;
  std::vector<Vec4c> base_;
  mutable std::vector<Vec4c> refined_;
  mutable bool have_refined_ = false;
};

/// Values at every node; throws NumericalError at the first non-finite value.
std::vector<Vec4c> sample(const MomentumWaveFunction& phi, const QuadratureGrid& grid);

/// Quadrature sums over pre-sampled values (no error estimate).
Complex hilbert_sum(const QuadratureGrid& grid, std::span<const Vec4c> a, std::span<const Vec4c> b);
Complex krein_sum(const QuadratureGrid& grid, std::span<const Vec4c> a, std::span<const Vec4c> b);

struct InnerProductReport {
  Complex value;
  std::string grid_id;
  /// |value - value on the refined grid|
  double estimated_error = 0.0;
};

InnerProductReport hilbert_inner(const MomentumWaveFunction& phi, const MomentumWaveFunction& psi,
                                 const QuadratureGrid& grid);
InnerProductReport krein_inner(const MomentumWaveFunction& phi, const MomentumWaveFunction& psi,
                               const QuadratureGrid& grid);
InnerProductReport hilbert_inner(const SampledWaveFunction& phi, const SampledWaveFunction& psi);
InnerProductReport krein_inner(const SampledWaveFunction& phi, const SampledWaveFunction& psi);

enum class KreinClass { positive, null, negative, indefinite_mixture };

std::string to_string(KreinClass k);

struct KreinClassification {
  KreinClass kind;
  InnerProductReport norm;
  /// Weighted integrals of the positive and negative parts of the pointwise
  /// density phi^dagger B J B phi.
  double positive_mass = 0.0;
  double negative_mass = 0.0;
};

/// null: both masses <= tol; positive / negative: only that mass exceeds
/// tol; indefinite-mixture otherwise.
KreinClassification krein_classify(const MomentumWaveFunction& phi, const QuadratureGrid& grid,
                                   double tol);

}  // namespace kreinphoton
