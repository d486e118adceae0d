#pragma once

// Projections onto the constraint sets used by the benchmark problems.
//
// The simplex routines are written against std::span of an arbitrary scalar
// so the test suite can run them on an instrumented number type and count
// the arithmetic and comparisons they perform.

#include "vigraal/errors.hpp"
#include "vigraal/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace vigraal {

/// KL (Bregman) projection of a positive vector onto {v >= 0 : sum v = total}:
/// plain rescaling, one accumulation pass plus one scaling pass.
template <class Scalar>
std::vector<Scalar> project_simplex_kl(std::span<const Scalar> x, const Scalar& total) {
  const Scalar zero{0.0};
  if (!(total > zero)) throw DomainError("project_simplex_kl: scale must be positive");
  Scalar sum = zero;
  for (const Scalar& xi : x) {
    if (!(xi > zero)) throw DomainError("project_simplex_kl: input must be strictly positive");
    sum = sum + xi;
  }
  const Scalar factor = total / sum;
  std::vector<Scalar> out;
  out.reserve(x.size());
  for (const Scalar& xi : x) out.push_back(xi * factor);
  return out;
}

/// Euclidean projection onto {v >= 0 : sum v = total} by sorting and
/// thresholding: v = max(x - tau, 0) with tau fixed by the active set.
template <class Scalar>
std::vector<Scalar> project_simplex_euclidean(std::span<const Scalar> x, const Scalar& total) {
  const Scalar zero{0.0};
  if (!(total > zero)) throw DomainError("project_simplex_euclidean: scale must be positive");
  std::vector<Scalar> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>{});
  Scalar cumulative = zero;
  Scalar tau = zero;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative = cumulative + sorted[k];
    const Scalar candidate = (cumulative - total) / Scalar(static_cast<double>(k + 1));
    if (sorted[k] > candidate) tau = candidate;
  }
  std::vector<Scalar> out;
  out.reserve(x.size());
  for (const Scalar& xi : x) {
    const Scalar shifted = xi - tau;
    out.push_back(shifted > zero ? shifted : zero);
  }
  return out;
}

inline Point project_simplex_kl(const Point& x, double total) {
  if (!x.allFinite()) throw DomainError("project_simplex_kl: non-finite input");
  const auto v = project_simplex_kl<double>(std::span<const double>(x.data(), x.size()), total);
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline Point project_simplex_euclidean(const Point& x, double total) {
  if (!x.allFinite()) throw DomainError("project_simplex_euclidean: non-finite input");
  const auto v =
      project_simplex_euclidean<double>(std::span<const double>(x.data(), x.size()), total);
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline Point project_box_euclidean(const Point& x, const Point& lo, const Point& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace vigraal
