#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>

namespace vigraal {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Primal coordinates. For non-Euclidean geometries these live in int dom h.
using Point = Vector;

/// A value of the gradient map; kept distinct from Point so primal and dual
/// coordinates cannot be mixed by accident.
struct DualPoint {
  Vector coords;

  Eigen::Index size() const { return coords.size(); }
  double operator[](Eigen::Index i) const { return coords[i]; }
};

inline constexpr double golden_ratio = std::numbers::phi;

inline bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace vigraal
