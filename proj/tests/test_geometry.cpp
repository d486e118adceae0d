#include "geometry_fixtures.hpp"

#include "vigraal/errors.hpp"
#include "vigraal/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace vigraal;
using vigraal::testing::random_feasible;
using vigraal::testing::random_interior;
using vigraal::testing::sample_geometries;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Geometry unit_fd() { return Geometry::fermi_dirac(vec({0.0}), vec({1.0})); }
Geometry sym_hellinger() { return Geometry::hellinger(vec({-1.0}), vec({1.0})); }

// Closed-form conjugates, written independently of the geometry code.
double conjugate(const Geometry& g, const Vector& t) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    switch (g.kind()) {
      case GeometryKind::Euclidean: acc += 0.5 * t[i] * t[i]; break;
      case GeometryKind::NegativeEntropy: acc += std::exp(t[i] - 1.0); break;
      case GeometryKind::FermiDiracBox: {
        const double lo = g.lower()[i], w = g.upper()[i] - lo;
        acc += lo * t[i] + w * std::log1p(std::exp(t[i])) - w * std::log(w);
        break;
      }
      case GeometryKind::HellingerBox: {
        const double c = 0.5 * (g.lower()[i] + g.upper()[i]), r = 0.5 * (g.upper()[i] - g.lower()[i]);
        acc += c * t[i] + r * std::sqrt(1.0 + t[i] * t[i]);
        break;
      }
    }
  }
  return acc;
}

Vector conjugate_gradient(const Geometry& g, const Vector& t) {
  Vector out(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    switch (g.kind()) {
      case GeometryKind::Euclidean: out[i] = t[i]; break;
      case GeometryKind::NegativeEntropy: out[i] = std::exp(t[i] - 1.0); break;
      case GeometryKind::FermiDiracBox: {
        const double lo = g.lower()[i], w = g.upper()[i] - lo;
        out[i] = lo + w / (1.0 + std::exp(-t[i]));
        break;
      }
      case GeometryKind::HellingerBox: {
        const double c = 0.5 * (g.lower()[i] + g.upper()[i]), r = 0.5 * (g.upper()[i] - g.lower()[i]);
        out[i] = c + r * t[i] / std::sqrt(1.0 + t[i] * t[i]);
        break;
      }
    }
  }
  return out;
}

}  // namespace

TEST(GeometryValue, Examples) {
  EXPECT_DOUBLE_EQ(Geometry::euclidean(2).value(vec({3.0, 4.0})), 12.5);
  EXPECT_DOUBLE_EQ(sym_hellinger().value(vec({0.0})), -1.0);
  EXPECT_NEAR(Geometry::negative_entropy(2).value(vec({0.5, 0.5})), -std::numbers::ln2, 1e-15);
}

TEST(GeometryValue, EntropyBoundaryIsZeroLogZero) {
  EXPECT_DOUBLE_EQ(Geometry::negative_entropy(2).value(vec({0.0, 1.0})), 0.0);
  EXPECT_DOUBLE_EQ(unit_fd().value(vec({0.0})), 0.0);
  EXPECT_DOUBLE_EQ(unit_fd().value(vec({1.0})), 0.0);
}

TEST(GeometryValue, OutsideClosureThrows) {
  EXPECT_THROW(Geometry::negative_entropy(1).value(vec({-0.1})), DomainError);
  EXPECT_THROW(unit_fd().value(vec({1.5})), DomainError);
  EXPECT_THROW(sym_hellinger().value(vec({-2.0})), DomainError);
  EXPECT_THROW(Geometry::euclidean(2).value(vec({1.0})), DomainError);
}

TEST(GeometryGradient, Examples) {
  EXPECT_DOUBLE_EQ(unit_fd().gradient(vec({0.5}))[0], 0.0);
  EXPECT_DOUBLE_EQ(sym_hellinger().gradient(vec({0.0}))[0], 0.0);
  EXPECT_DOUBLE_EQ(Geometry::negative_entropy(1).gradient(vec({1.0}))[0], 1.0);
  const auto t = Geometry::euclidean(2).gradient(vec({7.0, -2.0}));
  EXPECT_EQ(t.coords, vec({7.0, -2.0}));
}

TEST(GeometryGradient, MatchesCentralDifferences) {
  Rng rng(3);
  for (const auto& g : sample_geometries()) {
    for (int s = 0; s < 50; ++s) {
      const Point x = random_interior(g, rng);
      const Vector t = g.gradient(x).coords;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        double h = 1e-6;
        if (g.kind() != GeometryKind::Euclidean) {
          const double gap = g.kind() == GeometryKind::NegativeEntropy
                                 ? x[i]
                                 : std::min(x[i] - g.lower()[i], g.upper()[i] - x[i]);
          h = 1e-4 * gap;
        }
        Point up = x, down = x;
        up[i] += h;
        down[i] -= h;
        const double fd = (g.value(up) - g.value(down)) / (2.0 * h);
        EXPECT_NEAR(fd, t[i], 1e-5 * (1.0 + std::abs(t[i]))) << g.name() << " coordinate " << i;
      }
    }
  }
}

TEST(GeometryGradient, RejectsBoundaryAndExterior) {
  EXPECT_THROW(Geometry::negative_entropy(2).gradient(vec({0.0, 1.0})), DomainError);
  EXPECT_THROW(Geometry::negative_entropy(1).gradient(vec({1e-301})), DomainError);
  EXPECT_THROW(unit_fd().gradient(vec({1.0})), DomainError);
  EXPECT_THROW(sym_hellinger().gradient(vec({-1.0})), DomainError);
  EXPECT_THROW(sym_hellinger().gradient(vec({3.0})), DomainError);
  EXPECT_NO_THROW(Geometry::negative_entropy(1).gradient(vec({1e-299})));
}

TEST(GeometryGradientInverse, Examples) {
  EXPECT_EQ(Geometry::euclidean(2).gradient_inverse(DualPoint{vec({7.0, -2.0})}), vec({7.0, -2.0}));
  EXPECT_DOUBLE_EQ(unit_fd().gradient_inverse(DualPoint{vec({0.0})})[0], 0.5);
  EXPECT_DOUBLE_EQ(Geometry::negative_entropy(1).gradient_inverse(DualPoint{vec({1.0})})[0], 1.0);
  EXPECT_DOUBLE_EQ(sym_hellinger().gradient_inverse(DualPoint{vec({0.0})})[0], 0.0);
}

TEST(GeometryGradientInverse, HellingerSolvesTheScalarEquation) {
  // t = (2x - a - b) / (2 sqrt((x-a)(b-x))) on [a, b] = [2, 6]; for x = 5 that is 2 / (2 sqrt 3).
  const Geometry g = Geometry::hellinger(vec({2.0}), vec({6.0}));
  EXPECT_NEAR(g.gradient_inverse(DualPoint{vec({1.0 / std::sqrt(3.0)})})[0], 5.0, 1e-14);
}

TEST(GeometryGradientInverse, ExtremeDualValuesStayInterior) {
  for (const auto& g : sample_geometries()) {
    if (g.kind() == GeometryKind::Euclidean) continue;
    for (double t : {-1e6, -800.0, -50.0, 50.0, 800.0, 1e6}) {
      const Point x = g.gradient_inverse(DualPoint{Vector::Constant(g.dimension(), t)});
      EXPECT_TRUE(x.allFinite()) << g.name() << " t=" << t;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (g.kind() == GeometryKind::NegativeEntropy) {
          EXPECT_GT(x[i], 0.0);
        } else {
          EXPECT_GT(x[i], g.lower()[i]) << g.name() << " t=" << t;
          EXPECT_LT(x[i], g.upper()[i]) << g.name() << " t=" << t;
        }
      }
    }
  }
  EXPECT_THROW(unit_fd().gradient_inverse(DualPoint{vec({NAN})}), DomainError);
}

TEST(GeometryGradientInverse, RoundTrips) {
  Rng rng(5);
  std::uniform_real_distribution<double> dual(-6.0, 6.0);
  for (const auto& g : sample_geometries()) {
    for (int s = 0; s < 1000; ++s) {
      const Point x = random_interior(g, rng);
      const Point back = g.gradient_inverse(g.gradient(x));
      EXPECT_LE((back - x).cwiseAbs().maxCoeff(), 1e-10) << g.name();

      Vector t(g.dimension());
      for (auto& v : t) v = dual(rng);
      const Vector again = g.gradient(g.gradient_inverse(DualPoint{t})).coords;
      EXPECT_LE((again - t).cwiseAbs().maxCoeff(), 1e-10) << g.name();
    }
  }
}

TEST(BregmanDistance, Examples) {
  Rng rng(9);
  for (const auto& g : sample_geometries()) {
    const Point x = random_interior(g, rng);
    EXPECT_EQ(g.distance(x, x), 0.0) << g.name();
  }
  EXPECT_DOUBLE_EQ(Geometry::euclidean(2).distance(vec({1.0, 0.0}), vec({0.0, 1.0})), 1.0);
  const double expected = 0.5 * std::log(4.0 / 3.0);  // sum u log(u/v) + v - u
  EXPECT_NEAR(Geometry::negative_entropy(2).distance(vec({0.5, 0.5}), vec({0.25, 0.75})), expected, 1e-15);
  EXPECT_NEAR(expected, 0.143841, 1e-6);
}

TEST(BregmanDistance, NonnegativeAndPositiveOffDiagonal) {
  Rng rng(10);
  for (const auto& g : sample_geometries()) {
    for (int s = 0; s < 200; ++s) {
      const Point x = random_interior(g, rng), y = random_interior(g, rng);
      EXPECT_GT(g.distance(x, y), 0.0) << g.name();
    }
  }
}

TEST(BregmanDistance, EntropyBoundaryFirstArgument) {
  const Geometry g = Geometry::negative_entropy(2);
  // D(x, y) with x on the boundary: sum x log(x/y) - x + y
  EXPECT_NEAR(g.distance(vec({0.0, 1.0}), vec({0.5, 0.5})), std::log(2.0), 1e-15);
  EXPECT_THROW(g.distance(vec({0.5, 0.5}), vec({0.0, 1.0})), DomainError);
}

TEST(BregmanDistance, ThreePointIdentity) {
  Rng rng(11);
  for (const auto& g : sample_geometries()) {
    for (int s = 0; s < 1000; ++s) {
      const Point x = random_interior(g, rng), y = random_interior(g, rng), z = random_interior(g, rng);
      const auto r = vigraal::testing::three_point(g, x, y, z);
      EXPECT_LE(std::abs(r.residual), 1e-9 * (1.0 + r.magnitude)) << g.name();
    }
  }
}

TEST(BregmanDistance, ConvexCombinationIdentity) {
  Rng rng(12);
  std::uniform_real_distribution<double> alpha(-2.0, 3.0);
  for (const auto& g : sample_geometries()) {
    for (int s = 0; s < 1000; ++s) {
      const double spread = vigraal::testing::kCombinationSpread;
      const Point x = random_interior(g, rng), u = random_interior(g, rng, spread),
                  v = random_interior(g, rng, spread);
      const auto r = vigraal::testing::convex_combination(g, x, u, v, alpha(rng));
      EXPECT_LE(std::abs(r.residual), 1e-9 * (1.0 + r.magnitude)) << g.name();
    }
  }
}

TEST(BregmanDistance, DualFormMatchesConjugate) {
  Rng rng(13);
  for (const auto& g : sample_geometries()) {
    for (int s = 0; s < 200; ++s) {
      const Point x = random_interior(g, rng), y = random_interior(g, rng);
      const Vector tx = g.gradient(x).coords, ty = g.gradient(y).coords;
      // D_{h*}(grad h(y), grad h(x))
      const double dual = conjugate(g, ty) - conjugate(g, tx) - conjugate_gradient(g, tx).dot(ty - tx);
      const double primal = g.distance(x, y);
      EXPECT_NEAR(primal, dual, 1e-9 * (1.0 + std::abs(primal) + std::abs(conjugate(g, ty)))) << g.name();
    }
  }
}

TEST(BregmanDistance, StrongConvexityBound) {
  Rng rng(14);
  for (const auto& g : sample_geometries()) {
    for (int s = 0; s < 1000; ++s) {
      const Point x = random_feasible(g, rng), y = random_feasible(g, rng);
      EXPECT_GE(g.distance(x, y), 0.5 * g.sigma() * (x - y).squaredNorm() - 1e-12) << g.name();
    }
  }
}

TEST(GeometrySigma, PerKind) {
  EXPECT_DOUBLE_EQ(Geometry::euclidean(3).sigma(), 1.0);
  EXPECT_DOUBLE_EQ(Geometry::negative_entropy({SimplexBlock{2, 500.0}, SimplexBlock{2, 50.0}}).sigma(), 1.0 / 500.0);
  EXPECT_DOUBLE_EQ(Geometry::negative_entropy(4, 7.0).sigma(), 1.0 / 7.0);
  EXPECT_DOUBLE_EQ(Geometry::fermi_dirac(vec({0.0, 0.0}), vec({10.0, 2.0})).sigma(), 0.4);
  EXPECT_DOUBLE_EQ(Geometry::hellinger(vec({0.0, 0.0}), vec({10.0, 2.0})).sigma(), 0.2);
}

TEST(GeometryConstruction, RejectsBadParameters) {
  EXPECT_THROW(Geometry::euclidean(0), ConfigError);
  EXPECT_THROW(Geometry::negative_entropy(std::vector<SimplexBlock>{}), ConfigError);
  EXPECT_THROW(Geometry::negative_entropy(3, 0.0), ConfigError);
  EXPECT_THROW(Geometry::fermi_dirac(vec({1.0}), vec({1.0})), ConfigError);
  EXPECT_THROW(Geometry::hellinger(vec({0.0, 1.0}), vec({1.0})), ConfigError);
  EXPECT_EQ(to_string(GeometryKind::NegativeEntropy), "kl");
}

TEST(MirrorCombine, Examples) {
  Rng rng(15);
  for (const auto& g : sample_geometries()) {
    const Point w = random_interior(g, rng);
    EXPECT_LE((g.mirror_combine(w, w, 1.5) - w).cwiseAbs().maxCoeff(), 1e-12) << g.name();
  }
  EXPECT_EQ(Geometry::euclidean(2).mirror_combine(vec({1.0, 0.0}), vec({0.0, 1.0}), 2.0), vec({0.5, 0.5}));
  EXPECT_DOUBLE_EQ(unit_fd().mirror_combine(vec({0.5}), vec({0.5}), 1.5)[0], 0.5);
}

TEST(MirrorCombine, EuclideanIsTheAffineAverage) {
  Rng rng(16);
  std::uniform_real_distribution<double> phi(1.01, golden_ratio);
  const Geometry g = Geometry::euclidean(4);
  for (int s = 0; s < 1000; ++s) {
    const Point z = random_interior(g, rng), zb = random_interior(g, rng);
    const double p = phi(rng);
    const Point expected = ((p - 1.0) * z + zb) / p;
    EXPECT_LE((g.mirror_combine(z, zb, p) - expected).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(MirrorCombine, StaysInteriorAndRejectsBadPhi) {
  Rng rng(17);
  for (const auto& g : sample_geometries()) {
    for (int s = 0; s < 100; ++s) {
      const Point z = random_interior(g, rng), zb = random_interior(g, rng);
      EXPECT_TRUE(g.is_interior(g.mirror_combine(z, zb, golden_ratio))) << g.name();
    }
    const Point z = random_interior(g, rng);
    EXPECT_THROW(g.mirror_combine(z, z, 1.0), ConfigError);
  }
}

TEST(FreeFunctions, ForwardToGeometry) {
  const Geometry g = Geometry::negative_entropy(2);
  const Point x = vec({0.25, 0.75}), y = vec({0.5, 0.5});
  EXPECT_EQ(h_value(g, x), g.value(x));
  EXPECT_EQ(h_gradient(g, x).coords, g.gradient(x).coords);
  EXPECT_EQ(h_gradient_inverse(g, DualPoint{x}), g.gradient_inverse(DualPoint{x}));
  EXPECT_EQ(bregman_distance(g, x, y), g.distance(x, y));
  EXPECT_EQ(mirror_combine(g, x, y, 1.5), g.mirror_combine(x, y, 1.5));
}
