#pragma once

#include "vigraal/random.hpp"
#include "vigraal/types.hpp"

#include <cmath>
#include <random>

namespace vigraal {

/// Largest singular value of M by power iteration on A = M^T M. Stops once the
/// eigen-residual |A v - mu v| of the Rayleigh quotient mu is below rel_tol * mu,
/// which puts mu within rel_tol relative of an eigenvalue of A.
inline double spectral_norm(const Matrix& M, double rel_tol = 1e-10, int max_iters = 100000) {
  if (M.size() == 0) return 0.0;
  // Fixed pseudo-random start: a constant vector can be orthogonal to the
  // leading singular vector.
  Rng rng(0x5eed5eedULL);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  Vector v(M.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = u(rng);
  v.normalize();
  double mu = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const Vector w = M.transpose() * (M * v);
    mu = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    if ((w - mu * v).norm() <= rel_tol * mu) break;
    v = w / norm;
  }
  return std::sqrt(mu);
}

}  // namespace vigraal
