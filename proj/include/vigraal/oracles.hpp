#pragma once

// Brute-force and analytic reference computations for the test suites.
// Nothing here calls the projections, prox maps or solvers it is used to check.

#include "vigraal/errors.hpp"
#include "vigraal/problems.hpp"
#include "vigraal/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace vigraal::oracles {

struct OracleReport {
  std::string quantity;
  Vector oracle;
  Vector implementation;
  double max_abs_deviation = 0.0;
  double max_rel_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Pass iff the max absolute deviation is within tolerance.
inline OracleReport compare(std::string quantity, const Vector& oracle, const Vector& impl,
                            double tolerance) {
  OracleReport r{std::move(quantity), oracle, impl, 0.0, 0.0, tolerance, false};
  if (oracle.size() != impl.size()) {
    r.max_abs_deviation = r.max_rel_deviation = std::numeric_limits<double>::infinity();
    return r;
  }
  for (Eigen::Index i = 0; i < oracle.size(); ++i) {
    const double d = std::abs(oracle[i] - impl[i]);
    r.max_abs_deviation = std::max(r.max_abs_deviation, d);
    r.max_rel_deviation = std::max(r.max_rel_deviation, d / std::max(std::abs(oracle[i]), 1e-300));
  }
  r.passed = r.max_abs_deviation <= tolerance;
  return r;
}

/// argmin_{v in total*simplex} KL(v, x). Stationarity gives v_i = x_i e^{-nu};
/// the multiplier nu is found by bisection on sum_i v_i(nu) = total.
inline Vector kl_projection_oracle(const Vector& x, double total) {
  if (x.size() == 0 || !(total > 0.0)) throw OracleError("kl oracle: empty input or bad scale");
  if ((x.array() <= 0.0).any()) throw OracleError("kl oracle: input must be positive");
  auto mass = [&](double nu) { return (x.array() * std::exp(-nu)).sum(); };
  double lo = -1.0, hi = 1.0;
  for (int i = 0; mass(lo) < total; ++i) {
    lo *= 2.0;
    if (i > 60) throw OracleError("kl oracle: cannot bracket the multiplier");
  }
  for (int i = 0; mass(hi) > total; ++i) {
    hi *= 2.0;
    if (i > 60) throw OracleError("kl oracle: cannot bracket the multiplier");
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (mass(mid) > total ? lo : hi) = mid;
  }
  const double nu = 0.5 * (lo + hi);
  return x * std::exp(-nu);
}

/// Euclidean projection onto total*simplex by enumerating every support set S
/// and keeping the KKT-consistent candidate v_S = x_S - tau, tau = (sum x_S - total)/|S|.
inline Vector euclidean_projection_oracle(const Vector& x, double total) {
  const auto n = x.size();
  if (n == 0 || n > 6) throw OracleError("euclidean oracle: need 1 <= n <= 6");
  Vector best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    double sum = 0.0;
    int count = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        sum += x[i];
        ++count;
      }
    const double tau = (sum - total) / count;
    bool ok = true;
    Vector v = Vector::Zero(n);
    for (Eigen::Index i = 0; i < n && ok; ++i) {
      if (mask & (1u << i)) {
        v[i] = x[i] - tau;
        ok = v[i] >= -1e-15;
        v[i] = std::max(v[i], 0.0);
      } else {
        ok = x[i] - tau <= 1e-15;
      }
    }
    if (!ok) continue;
    const double d = (v - x).squaredNorm();
    if (d < best_dist) {
      best_dist = d;
      best = v;
    }
  }
  if (best.size() == 0) throw OracleError("euclidean oracle: no KKT point found");
  return best;
}

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h.
inline Vector finite_difference_gradient(const std::function<double(const Vector&)>& f,
                                         const Vector& x, double h) {
  Vector g(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

/// Damped Gauss-Seidel best response: firm i moves halfway to
/// clamp((a - c_i - b * others) / (2b), 0, C_i). Linear-demand Cournot is a
/// potential game, so these sweeps ascend a strictly concave potential.
inline Vector cournot_equilibrium_oracle(const CournotInstance& inst, double damping = 0.5) {
  if (inst.Nf <= 0 || inst.Nf > 10) throw OracleError("cournot oracle: need 1 <= Nf <= 10");
  Vector x = inst.C / 2.0;
  for (long sweep = 0; sweep < 1000000; ++sweep) {
    double moved_sq = 0.0;
    for (int i = 0; i < inst.Nf; ++i) {
      const double others = x.sum() - x[i];
      const double br = std::clamp((inst.a - inst.c[i] - inst.b * others) / (2.0 * inst.b), 0.0, inst.C[i]);
      const double next = (1.0 - damping) * x[i] + damping * br;
      moved_sq += (next - x[i]) * (next - x[i]);
      x[i] = next;
    }
    if (std::sqrt(moved_sq) < 1e-12) return x;
  }
  throw OracleError("cournot oracle: best response did not converge");
}

/// max_j (Mx)_j - min_i (M^T y)_i: zero exactly at saddle points.
inline double matrix_game_gap(const Matrix& M, const Vector& x, const Vector& y) {
  return (M * x).maxCoeff() - (M.transpose() * y).minCoeff();
}

}  // namespace vigraal::oracles
