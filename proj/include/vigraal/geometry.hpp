#pragma once

// Legendre functions h, their gradient maps and Bregman distances.
//
// Four kinds are supported:
//   Euclidean        h(x) = 1/2 |x|^2                                   dom h = R^n
//   NegativeEntropy  h(x) = sum x_i log x_i                             dom h = R^n_+
//   FermiDiracBox    h(x) = sum (x_i-a_i)log(x_i-a_i) + (b_i-x_i)log(b_i-x_i)
//   HellingerBox     h(x) = -sum sqrt((x_i-a_i)(b_i-x_i))               dom h = [a,b]
//
// sigma is the strong-convexity modulus on the feasible set the geometry is
// paired with: 1 for Euclidean, min_b 1/T_b over the simplex blocks for the
// negative entropy, min_i 4/(b_i-a_i) and min_i 2/(b_i-a_i) for the boxes.

#include "vigraal/errors.hpp"
#include "vigraal/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vigraal {

enum class GeometryKind { Euclidean, NegativeEntropy, FermiDiracBox, HellingerBox };

inline std::string_view to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::Euclidean: return "euclidean";
    case GeometryKind::NegativeEntropy: return "kl";
    case GeometryKind::FermiDiracBox: return "fermi-dirac";
    case GeometryKind::HellingerBox: return "hellinger";
  }
  return "?";
}

/// One factor of a product of scaled simplices {v >= 0 : sum v = scale}.
struct SimplexBlock {
  Eigen::Index size = 0;
  double scale = 1.0;

  friend bool operator==(const SimplexBlock&, const SimplexBlock&) = default;
};

namespace detail {

// Coordinates this close to the boundary of dom h are treated as on it.
inline constexpr double kBoundaryTol = 1e-300;
// exp overflows past ~709.78.
inline constexpr double kDualClamp = 700.0;

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

inline double clamp_dual(double t) { return std::clamp(t, -kDualClamp, kDualClamp); }

// Keeps a value produced by an inverse gradient strictly inside (lo, hi) when
// rounding lands it on an endpoint.
inline double nudge_inside(double x, double lo, double hi) {
  if (x <= lo) return std::nextafter(lo, hi);
  if (x >= hi) return std::nextafter(hi, lo);
  return x;
}

[[noreturn]] inline void domain_fail(std::string_view what, Eigen::Index i, double x) {
  throw DomainError(std::string(what) + ": coordinate " + std::to_string(i) + " = " +
                    std::to_string(x) + " is outside the domain");
}

}  // namespace detail

class Geometry {
 public:
  static Geometry euclidean(Eigen::Index n) {
    if (n <= 0) throw ConfigError("geometry dimension must be positive");
    Geometry g(GeometryKind::Euclidean, n);
    g.sigma_ = 1.0;
    return g;
  }

  /// Negative entropy over a product of scaled simplices.
  static Geometry negative_entropy(std::vector<SimplexBlock> blocks) {
    Eigen::Index n = 0;
    double sigma = std::numeric_limits<double>::infinity();
    for (const auto& b : blocks) {
      if (b.size <= 0 || !(b.scale > 0.0) || !std::isfinite(b.scale))
        throw ConfigError("simplex blocks need positive size and scale");
      n += b.size;
      sigma = std::min(sigma, 1.0 / b.scale);
    }
    if (n == 0) throw ConfigError("negative entropy needs at least one simplex block");
    Geometry g(GeometryKind::NegativeEntropy, n);
    g.blocks_ = std::move(blocks);
    g.sigma_ = sigma;
    return g;
  }

  static Geometry negative_entropy(Eigen::Index n, double scale = 1.0) {
    return negative_entropy({SimplexBlock{n, scale}});
  }

  static Geometry fermi_dirac(Vector lo, Vector hi) {
    return box(GeometryKind::FermiDiracBox, 4.0, std::move(lo), std::move(hi));
  }

  static Geometry hellinger(Vector lo, Vector hi) {
    return box(GeometryKind::HellingerBox, 2.0, std::move(lo), std::move(hi));
  }

  GeometryKind kind() const { return kind_; }
  Eigen::Index dimension() const { return n_; }
  double sigma() const { return sigma_; }
  const std::vector<SimplexBlock>& blocks() const { return blocks_; }
  const Vector& lower() const { return lo_; }
  const Vector& upper() const { return hi_; }
  std::string_view name() const { return to_string(kind_); }

  /// True when x lies strictly inside dom h, away from the boundary by more
  /// than the rejection threshold.
  bool is_interior(const Point& x) const {
    if (x.size() != n_ || !x.allFinite()) return false;
    for (Eigen::Index i = 0; i < n_; ++i) {
      switch (kind_) {
        case GeometryKind::Euclidean: break;
        case GeometryKind::NegativeEntropy:
          if (x[i] <= detail::kBoundaryTol) return false;
          break;
        case GeometryKind::FermiDiracBox:
        case GeometryKind::HellingerBox:
          if (x[i] - lo_[i] <= detail::kBoundaryTol || hi_[i] - x[i] <= detail::kBoundaryTol)
            return false;
          break;
      }
    }
    return true;
  }

  /// h(x). Boundary points are accepted for the entropies (0 log 0 = 0).
  double value(const Point& x) const {
    check_size(x);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      const double xi = x[i];
      if (!std::isfinite(xi)) detail::domain_fail("h_value", i, xi);
      switch (kind_) {
        case GeometryKind::Euclidean:
          acc += 0.5 * xi * xi;
          break;
        case GeometryKind::NegativeEntropy:
          if (xi < 0.0) detail::domain_fail("h_value", i, xi);
          acc += detail::xlogx(xi);
          break;
        case GeometryKind::FermiDiracBox:
          if (xi < lo_[i] || xi > hi_[i]) detail::domain_fail("h_value", i, xi);
          acc += detail::xlogx(xi - lo_[i]) + detail::xlogx(hi_[i] - xi);
          break;
        case GeometryKind::HellingerBox:
          if (xi < lo_[i] || xi > hi_[i]) detail::domain_fail("h_value", i, xi);
          acc -= std::sqrt(xi - lo_[i]) * std::sqrt(hi_[i] - xi);
          break;
      }
    }
    return acc;
  }

  DualPoint gradient(const Point& x) const {
    check_size(x);
    Vector t(n_);
    for (Eigen::Index i = 0; i < n_; ++i) {
      const double xi = x[i];
      if (!std::isfinite(xi)) detail::domain_fail("h_gradient", i, xi);
      switch (kind_) {
        case GeometryKind::Euclidean:
          t[i] = xi;
          break;
        case GeometryKind::NegativeEntropy:
          if (xi <= detail::kBoundaryTol) detail::domain_fail("h_gradient", i, xi);
          t[i] = 1.0 + std::log(xi);
          break;
        case GeometryKind::FermiDiracBox: {
          const double a = xi - lo_[i], b = hi_[i] - xi;
          if (a <= detail::kBoundaryTol || b <= detail::kBoundaryTol)
            detail::domain_fail("h_gradient", i, xi);
          t[i] = std::log(a) - std::log(b);
          break;
        }
        case GeometryKind::HellingerBox: {
          const double a = xi - lo_[i], b = hi_[i] - xi;
          if (a <= detail::kBoundaryTol || b <= detail::kBoundaryTol)
            detail::domain_fail("h_gradient", i, xi);
          t[i] = (a - b) / (2.0 * std::sqrt(a) * std::sqrt(b));
          break;
        }
      }
    }
    return DualPoint{std::move(t)};
  }

  /// The unique interior x with gradient(x) = t.
  Point gradient_inverse(const DualPoint& t) const {
    if (t.size() != n_) throw ConfigError("dual point has wrong dimension");
    Point x(n_);
    for (Eigen::Index i = 0; i < n_; ++i) {
      const double ti = t[i];
      if (!std::isfinite(ti)) detail::domain_fail("h_gradient_inverse", i, ti);
      switch (kind_) {
        case GeometryKind::Euclidean:
          x[i] = ti;
          break;
        case GeometryKind::NegativeEntropy:
          x[i] = std::exp(detail::clamp_dual(ti) - 1.0);
          break;
        case GeometryKind::FermiDiracBox: {
          // x = (a + b e^t) / (1 + e^t), written so the small gap to the
          // nearer endpoint is what gets computed.
          const double s = detail::clamp_dual(ti);
          const double w = hi_[i] - lo_[i];
          double xi;
          if (s >= 0.0) {
            xi = hi_[i] - w / (1.0 + std::exp(s));
          } else {
            const double e = std::exp(s);
            xi = lo_[i] + w * e / (1.0 + e);
          }
          x[i] = detail::nudge_inside(xi, lo_[i], hi_[i]);
          break;
        }
        case GeometryKind::HellingerBox: {
          // With c the midpoint and r the half width, t = (x-c)/sqrt(r^2-(x-c)^2)
          // solves to x = c + r t/sqrt(1+t^2). The distance to the nearer
          // endpoint is r/(q(q+|t|)) with q = sqrt(1+t^2).
          const double r = 0.5 * (hi_[i] - lo_[i]);
          const double q = std::hypot(1.0, ti);
          const double gap = r / (q * (q + std::abs(ti)));
          const double xi = ti >= 0.0 ? hi_[i] - gap : lo_[i] + gap;
          x[i] = detail::nudge_inside(xi, lo_[i], hi_[i]);
          break;
        }
      }
    }
    return x;
  }

  /// D_h(x, y) = h(x) - h(y) - <grad h(y), x - y>, y interior.
  double distance(const Point& x, const Point& y) const {
    const DualPoint gy = gradient(y);
    return value(x) - value(y) - gy.coords.dot(x - y);
  }

  /// grad h^{-1}( ((phi - 1) grad h(z) + grad h(zbar_prev)) / phi ).
  Point mirror_combine(const Point& z, const Point& zbar_prev, double phi) const {
    if (!(phi > 1.0)) throw ConfigError("mirror_combine needs phi > 1");
    const DualPoint gz = gradient(z);
    const DualPoint gb = gradient(zbar_prev);
    return gradient_inverse(DualPoint{((phi - 1.0) * gz.coords + gb.coords) / phi});
  }

 private:
  Geometry(GeometryKind kind, Eigen::Index n) : kind_(kind), n_(n) {}

  static Geometry box(GeometryKind kind, double modulus, Vector lo, Vector hi) {
    if (lo.size() == 0 || lo.size() != hi.size())
      throw ConfigError("box bounds must be non-empty and of equal length");
    double sigma = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
      if (!(lo[i] < hi[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i]))
        throw ConfigError("box bounds must satisfy lo < hi");
      sigma = std::min(sigma, modulus / (hi[i] - lo[i]));
    }
    Geometry g(kind, lo.size());
    g.lo_ = std::move(lo);
    g.hi_ = std::move(hi);
    g.sigma_ = sigma;
    return g;
  }

  void check_size(const Point& x) const {
    if (x.size() != n_)
      throw DomainError("point has dimension " + std::to_string(x.size()) + ", geometry expects " +
                        std::to_string(n_));
  }

  GeometryKind kind_;
  Eigen::Index n_;
  double sigma_ = 1.0;
  std::vector<SimplexBlock> blocks_;
  Vector lo_, hi_;
};

inline double h_value(const Geometry& g, const Point& x) { return g.value(x); }
inline DualPoint h_gradient(const Geometry& g, const Point& x) { return g.gradient(x); }
inline Point h_gradient_inverse(const Geometry& g, const DualPoint& t) {
  return g.gradient_inverse(t);
}
inline double bregman_distance(const Geometry& g, const Point& x, const Point& y) {
  return g.distance(x, y);
}
inline Point mirror_combine(const Geometry& g, const Point& z, const Point& zbar_prev, double phi) {
  return g.mirror_combine(z, zbar_prev, phi);
}

}  // namespace vigraal
