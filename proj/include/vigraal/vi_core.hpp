#pragma once

// Variational inequality problems: find z* with
//   <F(z*), z - z*> + g(z) - g(z*) >= 0  for all z,
// where g is the indicator of a simple constraint set.

#include "vigraal/errors.hpp"
#include "vigraal/geometry.hpp"
#include "vigraal/random.hpp"
#include "vigraal/types.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace vigraal {

enum class ConstraintKind { SimplexProduct, Box, Free };

struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::Free;
  Eigen::Index n = 0;
  std::vector<SimplexBlock> blocks;  // SimplexProduct
  Vector lo, hi;                     // Box

  static ConstraintSpec free(Eigen::Index n) {
    if (n <= 0) throw ConfigError("constraint dimension must be positive");
    return ConstraintSpec{ConstraintKind::Free, n, {}, {}, {}};
  }

  static ConstraintSpec simplex_product(std::vector<SimplexBlock> blocks) {
    Eigen::Index n = 0;
    for (const auto& b : blocks) {
      if (b.size <= 0 || !(b.scale > 0.0)) throw ConfigError("simplex block needs size, scale > 0");
      n += b.size;
    }
    if (n == 0) throw ConfigError("simplex product needs at least one block");
    return ConstraintSpec{ConstraintKind::SimplexProduct, n, std::move(blocks), {}, {}};
  }

  static ConstraintSpec box(Vector lo, Vector hi) {
    if (lo.size() == 0 || lo.size() != hi.size()) throw ConfigError("box bounds size mismatch");
    for (Eigen::Index i = 0; i < lo.size(); ++i)
      if (!(lo[i] < hi[i])) throw ConfigError("box bounds must satisfy lo < hi");
    const Eigen::Index n = lo.size();
    return ConstraintSpec{ConstraintKind::Box, n, {}, std::move(lo), std::move(hi)};
  }

  /// Constraint on the stacked variable (x, y).
  static ConstraintSpec product(const ConstraintSpec& a, const ConstraintSpec& b) {
    if (a.kind != b.kind) throw ConfigError("product of mixed constraint kinds is not supported");
    switch (a.kind) {
      case ConstraintKind::Free: return free(a.n + b.n);
      case ConstraintKind::SimplexProduct: {
        auto blocks = a.blocks;
        blocks.insert(blocks.end(), b.blocks.begin(), b.blocks.end());
        return simplex_product(std::move(blocks));
      }
      case ConstraintKind::Box: {
        Vector lo(a.n + b.n), hi(a.n + b.n);
        lo << a.lo, b.lo;
        hi << a.hi, b.hi;
        return box(std::move(lo), std::move(hi));
      }
    }
    throw ConfigError("unknown constraint kind");
  }
};

using OperatorFn = std::function<Vector(const Point&)>;

struct VIProblem {
  OperatorFn F;
  ConstraintSpec constraint;
  std::optional<double> lipschitz_hint;

  Eigen::Index dimension() const { return constraint.n; }

  Vector operator()(const Point& z) const {
    if (z.size() != constraint.n) throw ConfigError("operator evaluated at a point of wrong size");
    return F(z);
  }
};

using PartialGradientFn = std::function<Vector(const Vector& x, const Vector& y)>;

/// min_x max_y psi(x) + f(x, y) - zeta(y), with psi, zeta indicators of the
/// two constraint sets.
struct SaddlePointSpec {
  PartialGradientFn grad_x_f;
  PartialGradientFn grad_y_f;
  ConstraintSpec constraint_x;
  ConstraintSpec constraint_y;
};

/// F(x, y) = (grad_x f, -grad_y f) over the product constraint.
inline VIProblem saddle_to_vi(SaddlePointSpec spec) {
  if (!spec.grad_x_f || !spec.grad_y_f) throw ConfigError("saddle spec is missing a gradient");
  const Eigen::Index nx = spec.constraint_x.n;
  const Eigen::Index ny = spec.constraint_y.n;
  auto constraint = ConstraintSpec::product(spec.constraint_x, spec.constraint_y);
  OperatorFn F = [nx, ny, gx = std::move(spec.grad_x_f), gy = std::move(spec.grad_y_f)](
                     const Point& z) -> Vector {
    const Vector x = z.head(nx);
    const Vector y = z.tail(ny);
    Vector out(nx + ny);
    const Vector dx = gx(x, y);
    const Vector dy = gy(x, y);
    if (dx.size() != nx || dy.size() != ny)
      throw ConfigError("saddle gradient returned a vector of the wrong dimension");
    out.head(nx) = dx;
    out.tail(ny) = -dy;
    return out;
  };
  return VIProblem{std::move(F), std::move(constraint), std::nullopt};
}

/// Draws a point strictly inside the feasible set: Dirichlet(1) per simplex
/// block, uniform on the box shrunk by a relative margin, standard normal when free.
inline Point sample_interior(const ConstraintSpec& c, Rng& rng) {
  Point z(c.n);
  switch (c.kind) {
    case ConstraintKind::Free: {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (Eigen::Index i = 0; i < c.n; ++i) z[i] = normal(rng);
      break;
    }
    case ConstraintKind::SimplexProduct: {
      std::exponential_distribution<double> expo(1.0);
      Eigen::Index offset = 0;
      for (const auto& b : c.blocks) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < b.size; ++i) {
          double e = 0.0;
          while (!(e > 0.0)) e = expo(rng);
          z[offset + i] = e;
          sum += e;
        }
        z.segment(offset, b.size) *= b.scale / sum;
        offset += b.size;
      }
      break;
    }
    case ConstraintKind::Box: {
      constexpr double margin = 1e-6;
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (Eigen::Index i = 0; i < c.n; ++i) {
        const double w = c.hi[i] - c.lo[i];
        const double lo = c.lo[i] + margin * w, hi = c.hi[i] - margin * w;
        z[i] = lo + (hi - lo) * unit(rng);
      }
      break;
    }
  }
  return z;
}

struct MonotonicityReport {
  int samples = 0;
  double min_inner = std::numeric_limits<double>::infinity();  // min <F(z)-F(z'), z-z'>
  double scale = 0.0;  // max |F(z)-F(z')| |z-z'| over the same pairs
  bool passed = false;
};

/// Statistical monotonicity test over random interior pairs. Passes when
/// min <F(z)-F(z'), z-z'> >= -1e-9 * max(1, scale).
inline MonotonicityReport monotonicity_check(const VIProblem& p, int samples, std::uint64_t seed) {
  if (samples <= 0) throw ConfigError("monotonicity_check needs a positive sample count");
  Rng rng(derive_seed(seed, {0x6d6f6eULL}));
  MonotonicityReport report;
  report.samples = samples;
  for (int s = 0; s < samples; ++s) {
    const Point z = sample_interior(p.constraint, rng);
    const Point w = sample_interior(p.constraint, rng);
    const Vector dF = p(z) - p(w);
    const Vector dz = z - w;
    report.min_inner = std::min(report.min_inner, dF.dot(dz));
    report.scale = std::max(report.scale, dF.norm() * dz.norm());
  }
  report.passed = report.min_inner >= -1e-9 * std::max(1.0, report.scale);
  return report;
}

}  // namespace vigraal
