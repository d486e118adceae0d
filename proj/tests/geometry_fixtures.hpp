#pragma once

// Shared by the geometry unit tests and the acceptance binary: one geometry of
// each kind, interior/feasible samplers and the identity residuals.

#include "vigraal/geometry.hpp"
#include "vigraal/random.hpp"
#include "vigraal/vi_core.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace vigraal::testing {

inline std::vector<Geometry> sample_geometries() {
  Vector lo(3), hi(3);
  lo << -1.0, 0.0, 2.0;
  hi << 1.0, 3.0, 2.5;
  return {
      Geometry::euclidean(4),
      Geometry::negative_entropy({SimplexBlock{3, 1.0}, SimplexBlock{2, 5.0}}),
      Geometry::fermi_dirac(lo, hi),
      Geometry::hellinger(lo, hi),
  };
}

/// A point of int dom h. For the boxes the logistic parameter is uniform on
/// [-spread, spread], so the default reaches gaps of about 3e-4 of the width.
inline Point random_interior(const Geometry& g, Rng& rng, double spread = 8.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Point x(g.dimension());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    switch (g.kind()) {
      case GeometryKind::Euclidean: x[i] = 5.0 * u(rng); break;
      case GeometryKind::NegativeEntropy: x[i] = std::exp(-1.5 + 0.3125 * spread * u(rng)); break;
      case GeometryKind::FermiDiracBox:
      case GeometryKind::HellingerBox: {
        const double s = 1.0 / (1.0 + std::exp(-spread * u(rng)));
        x[i] = g.lower()[i] + (g.upper()[i] - g.lower()[i]) * s;
        break;
      }
    }
  }
  return x;
}

/// A point of the feasible set on which sigma is defined (simplex blocks for the entropy).
inline Point random_feasible(const Geometry& g, Rng& rng) {
  if (g.kind() == GeometryKind::NegativeEntropy)
    return sample_interior(ConstraintSpec::simplex_product(g.blocks()), rng);
  return random_interior(g, rng);
}

/// D(z,x) - D(z,y) - D(y,x) - <grad h(x) - grad h(y), y - z>, and the magnitude it is judged against.
struct IdentityResidual {
  double residual;
  double magnitude;
};

inline IdentityResidual three_point(const Geometry& g, const Point& x, const Point& y, const Point& z) {
  const double dzx = g.distance(z, x), dzy = g.distance(z, y), dyx = g.distance(y, x);
  const double inner = (g.gradient(x).coords - g.gradient(y).coords).dot(y - z);
  return {dzx - dzy - dyx - inner, std::abs(dzx) + std::abs(dzy) + std::abs(dyx) + std::abs(inner)};
}

/// Spread for convex_combination inputs. y is built from a dual combination
/// with weights up to 3, so wider inputs put y closer to a box endpoint than
/// double spacing resolves and the identity then measures rounding of y.
inline constexpr double kCombinationSpread = 3.0;

/// With grad h(y) = a grad h(u) + (1-a) grad h(v):
/// D(x,y) = a[D(x,u) - D(y,u)] + (1-a)[D(x,v) - D(y,v)].
inline IdentityResidual convex_combination(const Geometry& g, const Point& x, const Point& u,
                                           const Point& v, double a) {
  const Point y = g.gradient_inverse(DualPoint{a * g.gradient(u).coords + (1.0 - a) * g.gradient(v).coords});
  const double lhs = g.distance(x, y);
  const double l = g.distance(x, u) - g.distance(y, u);
  const double r = g.distance(x, v) - g.distance(y, v);
  const double rhs = a * l + (1.0 - a) * r;
  return {lhs - rhs, std::abs(lhs) + std::abs(a * l) + std::abs((1.0 - a) * r)};
}

}  // namespace vigraal::testing
