#include "kreinphoton/wavefunction.hpp"

#include <cmath>
#include <cstdio>

#include "kreinphoton/errors.hpp"
#include "kreinphoton/krein_core.hpp"
#include "kreinphoton/parallel.hpp"

namespace kreinphoton {
namespace {

bool finite(const Vec4c& v) {
  for (int i = 0; i < 4; ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  }
  return true;
}

std::string describe_node(const ConePoint& p) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "(%.17g, %.17g, %.17g)", p[0], p[1], p[2]);
  return buf;
}

template <class Form>
Complex weighted_sum(const QuadratureGrid& grid, std::span<const Vec4c> a, std::span<const Vec4c> b,
                     Form form) {
  if (a.size() != grid.size() || b.size() != grid.size()) {
    throw ConfigError("sample count does not match the grid");
  }
  const auto& nodes = grid.nodes();
  const auto& weights = grid.weights();
  std::vector<Complex> terms(grid.size());
  parallel_for_chunks(grid.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      terms[n] = weights[n] * form(nodes[n], a[n], b[n]);
    }
  });
  return pairwise_sum(terms);
}

Complex hilbert_density(const ConePoint& p, const Vec4c& a, const Vec4c& b) {
  return hilbert_form(p, a, b);
}

Complex krein_density(const ConePoint& p, const Vec4c& a, const Vec4c& b) {
  require_supported_radius(p);
  return krein_form(a, b);
}

InnerProductReport make_report(const QuadratureGrid& grid, Complex base, Complex refined) {
  return {base, grid.id(), std::abs(base - refined)};
}

}  // namespace

// --- MomentumWaveFunction -------------------------------------------------

MomentumWaveFunction::MomentumWaveFunction()
    : MomentumWaveFunction([](const ConePoint&) { return Vec4c::Zero().eval(); }, "0") {}

MomentumWaveFunction::MomentumWaveFunction(Evaluator evaluator, std::string description)
    : evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))),
      description_(std::move(description)) {}

MomentumWaveFunction MomentumWaveFunction::with_phase(std::function<double(const ConePoint&)> angle,
                                                      std::string description) const {
  auto inner = evaluator_;
  return MomentumWaveFunction(
      [inner, angle = std::move(angle)](const ConePoint& p) -> Vec4c {
        return std::polar(1.0, angle(p)) * (*inner)(p);
      },
      std::move(description));
}

MomentumWaveFunction MomentumWaveFunction::left_multiplied(const Mat4c& m) const {
  auto inner = evaluator_;
  return MomentumWaveFunction([inner, m](const ConePoint& p) -> Vec4c { return m * (*inner)(p); },
                              "M*" + description_);
}

MomentumWaveFunction MomentumWaveFunction::pulled_back(const LorentzMatrix& point_map,
                                                       const Mat4& outer) const {
  auto inner = evaluator_;
  return MomentumWaveFunction(
      [inner, point_map, outer](const ConePoint& p) -> Vec4c {
        return outer.cast<Complex>() * (*inner)(lorentz_act_point(point_map, p));
      },
      "pullback(" + description_ + ")");
}

MomentumWaveFunction operator+(const MomentumWaveFunction& a, const MomentumWaveFunction& b) {
  auto fa = a.evaluator_;
  auto fb = b.evaluator_;
  return MomentumWaveFunction([fa, fb](const ConePoint& p) -> Vec4c { return (*fa)(p) + (*fb)(p); },
                              a.description_ + " + " + b.description_);
}

MomentumWaveFunction operator-(const MomentumWaveFunction& a, const MomentumWaveFunction& b) {
  auto fa = a.evaluator_;
  auto fb = b.evaluator_;
  return MomentumWaveFunction([fa, fb](const ConePoint& p) -> Vec4c { return (*fa)(p) - (*fb)(p); },
                              a.description_ + " - (" + b.description_ + ")");
}

MomentumWaveFunction operator*(Complex c, const MomentumWaveFunction& a) {
  auto fa = a.evaluator_;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "(%.6g%+.6gi)*", c.real(), c.imag());
  return MomentumWaveFunction([fa, c](const ConePoint& p) -> Vec4c { return c * (*fa)(p); },
                              buf + a.description_);
}

// --- sampling ---------------------------------------------------------------

std::vector<Vec4c> sample(const MomentumWaveFunction& phi, const QuadratureGrid& grid) {
  const auto& nodes = grid.nodes();
  std::vector<Vec4c> out(nodes.size());
  parallel_for_chunks(nodes.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      out[n] = phi(nodes[n]);
      if (!finite(out[n])) {
        throw NumericalError("non-finite value of " + phi.description() + " at node " +
                             describe_node(nodes[n]));
      }
    }
  });
  return out;
}

SampledWaveFunction::SampledWaveFunction(const MomentumWaveFunction& phi, const QuadratureGrid& grid)
    : phi_(phi), grid_(&grid), base_(sample(phi, grid)) {}

const std::vector<Vec4c>& SampledWaveFunction::refined() const {
  if (!have_refined_) {
    refined_ = sample(phi_, grid_->refined());
    have_refined_ = true;
  }
  return refined_;
}

Complex hilbert_sum(const QuadratureGrid& grid, std::span<const Vec4c> a, std::span<const Vec4c> b) {
  return weighted_sum(grid, a, b, hilbert_density);
}

Complex krein_sum(const QuadratureGrid& grid, std::span<const Vec4c> a, std::span<const Vec4c> b) {
  return weighted_sum(grid, a, b, krein_density);
}

InnerProductReport hilbert_inner(const SampledWaveFunction& phi, const SampledWaveFunction& psi) {
  const QuadratureGrid& grid = phi.grid();
  return make_report(grid, hilbert_sum(grid, phi.base(), psi.base()),
                     hilbert_sum(grid.refined(), phi.refined(), psi.refined()));
}

InnerProductReport krein_inner(const SampledWaveFunction& phi, const SampledWaveFunction& psi) {
  const QuadratureGrid& grid = phi.grid();
  return make_report(grid, krein_sum(grid, phi.base(), psi.base()),
                     krein_sum(grid.refined(), phi.refined(), psi.refined()));
}

InnerProductReport hilbert_inner(const MomentumWaveFunction& phi, const MomentumWaveFunction& psi,
                                 const QuadratureGrid& grid) {
  return hilbert_inner(SampledWaveFunction(phi, grid), SampledWaveFunction(psi, grid));
}

InnerProductReport krein_inner(const MomentumWaveFunction& phi, const MomentumWaveFunction& psi,
                               const QuadratureGrid& grid) {
  return krein_inner(SampledWaveFunction(phi, grid), SampledWaveFunction(psi, grid));
}

// --- classification ---------------------------------------------------------

std::string to_string(KreinClass k) {
  switch (k) {
    case KreinClass::positive: return "positive";
    case KreinClass::null: return "null";
    case KreinClass::negative: return "negative";
    case KreinClass::indefinite_mixture: return "indefinite-mixture";
  }
  return "unknown";
}

KreinClassification krein_classify(const MomentumWaveFunction& phi, const QuadratureGrid& grid,
                                   double tol) {
  const SampledWaveFunction s(phi, grid);
  KreinClassification out{KreinClass::null, krein_inner(s, s), 0.0, 0.0};

  const auto& nodes = grid.nodes();
  const auto& weights = grid.weights();
  std::vector<double> pos(grid.size()), neg(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const double d = krein_density(nodes[n], s.base()[n], s.base()[n]).real();
    pos[n] = d > 0.0 ? weights[n] * d : 0.0;
    neg[n] = d < 0.0 ? -weights[n] * d : 0.0;
  }
  out.positive_mass = pairwise_sum(pos);
  out.negative_mass = pairwise_sum(neg);

  const bool has_pos = out.positive_mass > tol;
  const bool has_neg = out.negative_mass > tol;
  if (has_pos && has_neg) {
    out.kind = KreinClass::indefinite_mixture;
  } else if (has_pos) {
    out.kind = KreinClass::positive;
  } else if (has_neg) {
    out.kind = KreinClass::negative;
  }
  return out;
}

}  // namespace kreinphoton
