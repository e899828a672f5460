#include "kreinphoton/schwartz_fourier.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "kreinphoton/errors.hpp"
#include "kreinphoton/krein_core.hpp"
#include "kreinphoton/parallel.hpp"

namespace kreinphoton {
namespace {

constexpr double kInitialStep = 0.1;
constexpr double kMinimumStep = 1e-8;
constexpr double kRelativeSettle = 1e-3;

void multi_indices(int dimension, int order, std::vector<std::vector<int>>& out) {
  std::vector<int> m(static_cast<std::size_t>(dimension), 0);
  std::function<void(int, int)> rec = [&](int slot, int remaining) {
    if (slot == dimension) {
      out.push_back(m);
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      m[static_cast<std::size_t>(slot)] = k;
      rec(slot + 1, remaining - k);
    }
    m[static_cast<std::size_t>(slot)] = 0;
  };
  rec(0, order);
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

/// Tensor-product central difference for D^m f(0) with spacing h.
Vec4c central_difference(const TestFunction& f, const std::vector<int>& m, double h) {
  const int d = f.dimension();
  std::vector<int> k(static_cast<std::size_t>(d), 0);
  Vec4c sum = Vec4c::Zero();
  int total = 0;
  for (int v : m) total += v;
  for (;;) {
    EuclideanPoint x(d);
    double coefficient = 1.0;
    for (int i = 0; i < d; ++i) {
      const auto s = static_cast<std::size_t>(i);
      x[i] = (0.5 * m[s] - k[s]) * h;
      coefficient *= ((k[s] % 2) ? -1.0 : 1.0) * binomial(m[s], k[s]);
    }
    sum += coefficient * f(x);
    int i = 0;
    for (; i < d; ++i) {
      const auto s = static_cast<std::size_t>(i);
      if (++k[s] <= m[s]) break;
      k[s] = 0;
    }
    if (i == d) break;
  }
  return sum / std::pow(h, total);
}

double envelope_exponent(const EuclideanPoint& k, double gauss_factor) {
  const double s = k.squaredNorm();
  if (s == 0.0) return -std::numeric_limits<double>::infinity();
  return -gauss_factor * s - 1.0 / s;
}

}  // namespace

TestFunction::TestFunction(int dimension, int components, Evaluator evaluator, std::string name,
                           int smoothness_order)
    : dimension_(dimension),
      components_(components),
      evaluator_(std::move(evaluator)),
      name_(std::move(name)),
      smoothness_order_(smoothness_order) {
  if (dimension_ != 3 && dimension_ != 4) throw ConfigError("test functions live on R^3 or R^4");
  if (components_ != 1 && components_ != 4) throw ConfigError("test functions have 1 or 4 components");
}

TestFunction TestFunction::scalar(int dimension, std::function<Complex(const EuclideanPoint&)> f,
                                  std::string name, int smoothness_order) {
  return TestFunction(
      dimension, 1,
      [f = std::move(f)](const EuclideanPoint& x) {
        Vec4c v = Vec4c::Zero();
        v[0] = f(x);
        return v;
      },
      std::move(name), smoothness_order);
}

TestFunction TestFunction::operator+(const TestFunction& other) const {
  if (dimension_ != other.dimension_) throw ConfigError("dimension mismatch in test-function sum");
  auto a = evaluator_;
  auto b = other.evaluator_;
  return TestFunction(dimension_, std::max(components_, other.components_),
                      [a, b](const EuclideanPoint& x) -> Vec4c { return a(x) + b(x); },
                      name_ + " + " + other.name_, std::min(smoothness_order_, other.smoothness_order_));
}

TestFunction TestFunction::scaled(Complex c) const {
  auto a = evaluator_;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "(%.6g%+.6gi)*", c.real(), c.imag());
  return TestFunction(dimension_, components_, [a, c](const EuclideanPoint& x) -> Vec4c { return c * a(x); },
                      buf + name_, smoothness_order_);
}

TestFunction TestFunction::translated(const Vec4& a) const {
  if (dimension_ != 4) throw ConfigError("translations act on R^4 test functions");
  auto f = evaluator_;
  return TestFunction(
      4, components_,
      [f, a](const EuclideanPoint& k) -> Vec4c {
        return std::polar(1.0, a[0] * k[0] - a[1] * k[1] - a[2] * k[2] - a[3] * k[3]) * f(k);
      },
      "T(a)" + name_, smoothness_order_);
}

MembershipReport s0_membership(const TestFunction& f, int order, double tol) {
  if (order < 0 || order > f.smoothness_order()) {
    throw ConfigError("derivative order " + std::to_string(order) + " not supported by " + f.name());
  }
  if (!(tol > 0.0)) throw ConfigError("membership tolerance must be positive");

  std::vector<std::vector<int>> indices;
  multi_indices(f.dimension(), order, indices);
  auto estimate = [&](double h) {
    std::vector<Vec4c> out;
    out.reserve(indices.size());
    for (const auto& m : indices) out.push_back(central_difference(f, m, h));
    return out;
  };

  // Central differences have an even error expansion in h, so successive
  // Richardson combinations (4 E(h/2) - E(h)) / 3 are compared.
  double h = kInitialStep;
  std::vector<Vec4c> coarse = estimate(h);
  std::vector<Vec4c> previous;
  for (;;) {
    const double fine_step = 0.5 * h;
    if (fine_step < kMinimumStep) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "derivatives of %s did not settle above spacing %.1e", f.name().c_str(),
                    kMinimumStep);
      throw StencilUnderflow(buf);
    }
    const std::vector<Vec4c> fine = estimate(fine_step);
    std::vector<Vec4c> extrapolated(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) extrapolated[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
    if (!previous.empty()) {
      bool settled = true;
      double worst = 0.0;
      for (std::size_t i = 0; i < extrapolated.size(); ++i) {
        for (int c = 0; c < 4; ++c) {
          const double value = std::abs(extrapolated[i][c]);
          if (std::abs(extrapolated[i][c] - previous[i][c]) > 0.5 * tol + kRelativeSettle * value) settled = false;
          worst = std::max(worst, value);
        }
      }
      if (settled) return {worst < tol, worst, order, tol, fine_step};
    }
    previous = std::move(extrapolated);
    coarse = fine;
    h = fine_step;
  }
}

TestFunction restrict_to_cone(const TestFunction& f) {
  if (f.dimension() != 4) throw ConfigError("only R^4 test functions restrict to the cone");
  return TestFunction(
      3, f.components(),
      [f](const EuclideanPoint& p) -> Vec4c {
        EuclideanPoint k(4);
        k << p.norm(), p[0], p[1], p[2];
        return f(k);
      },
      f.name() + "|cone", f.smoothness_order());
}

MomentumWaveFunction cone_wavefunction(const TestFunction& f) {
  const TestFunction restricted = f.dimension() == 4 ? restrict_to_cone(f) : f;
  return MomentumWaveFunction(
      [restricted](const ConePoint& p) -> Vec4c {
        EuclideanPoint x(3);
        x << p[0], p[1], p[2];
        return restricted(x);
      },
      restricted.name());
}

FourierReport fourier_to_position(const MomentumWaveFunction& phi, const QuadratureGrid& grid,
                                  const Vec4& x, bool strict) {
  auto transform = [&](const QuadratureGrid& g) {
    const std::vector<Vec4c> values = sample(phi, g);
    const auto& nodes = g.nodes();
    const auto& weights = g.weights();
    std::vector<Complex> terms[4];
    for (auto& t : terms) t.resize(g.size());
    parallel_for_chunks(g.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t n = begin; n < end; ++n) {
        const ConePoint& p = nodes[n];
        const Complex phase = std::polar(weights[n], -(x[0] * p.r() - x[1] * p[0] - x[2] * p[1] - x[3] * p[2]));
        for (int c = 0; c < 4; ++c) terms[c][n] = phase * values[n][c];
      }
    });
    const double norm = std::pow(2.0 * std::numbers::pi, -1.5);
    Vec4c out;
    for (int c = 0; c < 4; ++c) out[c] = norm * pairwise_sum(terms[c]);
    return out;
  };
  FourierReport out;
  out.value = transform(grid);
  out.grid_id = grid.id();
  out.estimated_error = (out.value - transform(grid.refined())).cwiseAbs().maxCoeff();
  out.oscillation_warning = out.estimated_error > kOscillationThreshold * out.value.norm();
  if (strict && out.oscillation_warning) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "oscillatory quadrature error %.3e exceeds %.0e of |value| = %.3e",
                  out.estimated_error, kOscillationThreshold, out.value.norm());
    throw OscillationWarning(buf);
  }
  return out;
}

TestFunction library_test_function(std::string_view name) {
  using F = std::function<Complex(const EuclideanPoint&)>;
  F f;
  if (name == "s0_gauss") {
    f = [](const EuclideanPoint& k) { return Complex(std::exp(envelope_exponent(k, 1.0))); };
  } else if (name == "s0_shell") {
    f = [](const EuclideanPoint& k) { return Complex(k[0] * std::exp(envelope_exponent(k, 1.0))); };
  } else if (name == "s0_poly") {
    f = [](const EuclideanPoint& k) {
      return Complex((k[0] * k[0] + k[1] * k[3]) * std::exp(envelope_exponent(k, 0.5)));
    };
  } else if (name == "gauss") {
    f = [](const EuclideanPoint& k) { return Complex(std::exp(-k.squaredNorm())); };
  } else if (name == "quad_gauss") {
    f = [](const EuclideanPoint& k) { return Complex(k.squaredNorm() * std::exp(-k.squaredNorm())); };
  } else {
    throw ConfigError("unknown test function '" + std::string(name) + "'");
  }
  return TestFunction::scalar(4, std::move(f), std::string(name));
}

std::vector<std::string> library_test_function_names() {
  return {"s0_gauss", "s0_shell", "s0_poly", "gauss", "quad_gauss"};
}

bool library_is_s0(std::string_view name) {
  library_test_function(name);
  return name.starts_with("s0_");
}

TestFunction vector_test_function(std::string_view name, const Vec4c& polarization) {
  const TestFunction f = library_test_function(name);
  return TestFunction(
      4, 4, [f, polarization](const EuclideanPoint& k) -> Vec4c { return f(k)[0] * polarization; },
      std::string(name) + "*eps", f.smoothness_order());
}

TestFunction transversal_test_function(std::string_view name, bool plus) {
  const TestFunction f = library_test_function(name);
  const EigenMode mode = plus ? EigenMode::transverse_plus : EigenMode::transverse_minus;
  return TestFunction(
      4, 4,
      [f, mode](const EuclideanPoint& k) -> Vec4c {
        const Vec3 s(k[1], k[2], k[3]);
        if (s.norm() == 0.0) return Vec4c::Zero();
        return eigenvector(ConePoint(s), mode).cast<Complex>() * f(k)[0];
      },
      std::string(plus ? "w1p*" : "w1m*") + std::string(name), f.smoothness_order());
}

}  // namespace kreinphoton
