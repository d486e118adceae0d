#pragma once

// Golden-ratio iterations for monotone variational inequalities under a
// Bregman geometry.
//
// Fixed step (needs lambda <= sigma phi / (2L)):
//   zbar_k  = grad h^{-1}( ((phi-1) grad h(z_k) + grad h(zbar_{k-1})) / phi )
//   z_{k+1} = prox^h_{lambda g}( grad h^{-1}( grad h(zbar_k) - lambda F(z_k) ) )
//
// Adaptive: the same two updates with lambda_k from compute_step_size and
// theta_k = lambda_k phi / lambda_{k-1}. Initialisation sets z_1 = zbar_0,
// theta_0 = 1.

#include "vigraal/errors.hpp"
#include "vigraal/geometry.hpp"
#include "vigraal/projections.hpp"
#include "vigraal/random.hpp"
#include "vigraal/types.hpp"
#include "vigraal/vi_core.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vigraal {

/// An iterate left the representable interior of dom h.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double default_rho(double phi) { return 1.0 / phi + 1.0 / (phi * phi); }

struct FixedStepConfig {
  double lambda = 0.0;
  double phi = golden_ratio;
  long max_iters = 1000;
  double target_residual_sq = 0.0;

  /// Throws ConfigError unless lambda is in (0, sigma phi / (2L)] (the bound
  /// only applies when a Lipschitz constant is known).
  void validate(double sigma, std::optional<double> lipschitz) const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("fixed step: lambda must be > 0");
    if (!(phi > 1.0) || phi > golden_ratio) throw ConfigError("fixed step: phi must be in (1, golden ratio]");
    if (max_iters < 0) throw ConfigError("fixed step: max_iters must be >= 0");
    if (lipschitz && *lipschitz > 0.0 && lambda > sigma * phi / (2.0 * *lipschitz))
      throw ConfigError("fixed step: lambda exceeds sigma*phi/(2L)");
  }
};

struct AdaptiveConfig {
  double phi = 1.5;
  double rho = default_rho(1.5);
  double lambda0 = 1.0;
  double lambda_max = 1e6;
  long max_iters = 1000;
  double target_residual_sq = 0.0;

  void validate() const {
    if (!(phi > 1.0) || phi > golden_ratio) throw ConfigError("adaptive: phi must be in (1, golden ratio]");
    // rho is usually computed from phi; allow the last ulp of rounding.
    if (!(rho >= 1.0) || rho > default_rho(phi) * (1.0 + 1e-15))
      throw ConfigError("adaptive: rho must be in [1, 1/phi + 1/phi^2]");
    if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) throw ConfigError("adaptive: lambda0 must be > 0");
    if (!(lambda_max > 0.0) || lambda0 > lambda_max)
      throw ConfigError("adaptive: need 0 < lambda0 <= lambda_max");
    if (max_iters < 0) throw ConfigError("adaptive: max_iters must be >= 0");
  }
};

/// Iteration state before step k: z = z_k, z_prev = z_{k-1}, zbar = zbar_{k-1},
/// lambda = lambda_{k-1}, theta = theta_{k-1}. A step advances every field by one.
struct SolverState {
  Point z;
  Point zbar;
  Point z_prev;
  Vector F_z;
  Vector F_z_prev;
  double lambda = 0.0;
  double lambda_prev = 0.0;
  double theta = 1.0;
  long iter = 0;
  // |z_k - z_{k-1}|^2 and |F(z_k) - F(z_{k-1})|^2 that entered the last step size.
  double step_dz_sq = 0.0;
  double step_dF_sq = 0.0;
};

/// min{ rho lambda_prev, sigma phi theta_prev / (4 lambda_prev) |dz|^2/|dF|^2, lambda_max },
/// with the middle term read as +inf when dF = 0.
inline double compute_step_size(double lambda_prev, double theta_prev, const Point& z,
                                const Point& z_prev, const Vector& Fz, const Vector& Fz_prev,
                                double sigma, double phi, double rho, double lambda_max) {
  const double dz_sq = (z - z_prev).squaredNorm();
  const double dF_sq = (Fz - Fz_prev).squaredNorm();
  double local = std::numeric_limits<double>::infinity();
  if (dF_sq > 0.0) local = sigma * phi * theta_prev / (4.0 * lambda_prev) * (dz_sq / dF_sq);
  return std::min({rho * lambda_prev, local, lambda_max});
}

/// The Bregman proximal map of lambda g for the (geometry, constraint) pairs
/// that have a closed form:
///   any geometry      + Free            -> grad h^{-1}
///   Euclidean         + SimplexProduct  -> sort-and-threshold projection per block
///   NegativeEntropy   + SimplexProduct  -> per-block normalisation
///   Euclidean         + Box             -> clamp
///   Fermi-Dirac/Hellinger + same Box    -> grad h^{-1} (dom h is the box)
/// Anything else is rejected on construction.
class ProxMap {
 public:
  ProxMap(const Geometry& geom, const ConstraintSpec& constraint)
      : geom_(&geom), constraint_(&constraint) {
    if (geom.dimension() != constraint.n)
      throw ConfigError("geometry and constraint dimensions differ");
    const auto kind = geom.kind();
    switch (constraint.kind) {
      case ConstraintKind::Free:
        return;
      case ConstraintKind::SimplexProduct:
        if (kind == GeometryKind::Euclidean) return;
        if (kind == GeometryKind::NegativeEntropy) {
          if (geom.blocks() != constraint.blocks)
            throw ConfigError("entropy blocks do not match the simplex constraint blocks");
          return;
        }
        break;
      case ConstraintKind::Box:
        if (kind == GeometryKind::Euclidean) return;
        if (kind == GeometryKind::FermiDiracBox || kind == GeometryKind::HellingerBox) {
          if (geom.lower() != constraint.lo || geom.upper() != constraint.hi)
            throw ConfigError("box geometry bounds do not match the box constraint");
          return;
        }
        break;
    }
    throw ConfigError("geometry '" + std::string(geom.name()) +
                      "' has no closed-form prox for this constraint");
  }

  /// prox^h_{lambda g}( grad h^{-1}(t) ).
  Point operator()(const DualPoint& t) const {
    const Geometry& g = *geom_;
    const ConstraintSpec& c = *constraint_;
    switch (c.kind) {
      case ConstraintKind::Free:
        return g.gradient_inverse(t);
      case ConstraintKind::Box:
        if (g.kind() == GeometryKind::Euclidean) return project_box_euclidean(t.coords, c.lo, c.hi);
        return g.gradient_inverse(t);
      case ConstraintKind::SimplexProduct: {
        Point out(c.n);
        Eigen::Index offset = 0;
        for (const auto& b : c.blocks) {
          auto seg = t.coords.segment(offset, b.size);
          if (g.kind() == GeometryKind::Euclidean) {
            out.segment(offset, b.size) = project_simplex_euclidean(Vector(seg), b.scale);
          } else {
            // Normalisation is invariant to a constant dual shift; shifting by
            // the block max keeps exp() in range.
            const Vector shifted = seg.array() - seg.maxCoeff();
            const Vector primal = (shifted.array() - 1.0).exp();
            out.segment(offset, b.size) = project_simplex_kl(primal, b.scale);
          }
          offset += b.size;
        }
        return out;
      }
    }
    throw ConfigError("unknown constraint kind");
  }

 private:
  const Geometry* geom_;
  const ConstraintSpec* constraint_;
};

namespace detail {

inline Point checked_interior(const Geometry& g, Point x, std::string_view what) {
  if (!g.is_interior(x)) throw NumericalFailure(std::string(what) + " left the interior of dom h");
  return x;
}

// One golden-ratio update with step lambda; fills z, zbar, F caches and iter.
inline SolverState golden_update(const SolverState& s, const VIProblem& p, const Geometry& geom,
                                 const ProxMap& prox, double lambda, double phi) {
  SolverState next;
  next.zbar = checked_interior(geom, geom.mirror_combine(s.z, s.zbar, phi), "zbar");
  const DualPoint t{geom.gradient(next.zbar).coords - lambda * s.F_z};
  if (!t.coords.allFinite()) throw NumericalFailure("dual step is not finite");
  next.z = checked_interior(geom, prox(t), "z");
  next.F_z = p(next.z);
  if (!next.F_z.allFinite()) throw NumericalFailure("operator value is not finite");
  next.z_prev = s.z;
  next.F_z_prev = s.F_z;
  next.lambda = lambda;
  next.lambda_prev = s.lambda;
  next.iter = s.iter + 1;
  next.step_dz_sq = (s.z - s.z_prev).squaredNorm();
  next.step_dF_sq = (s.F_z - s.F_z_prev).squaredNorm();
  return next;
}

}  // namespace detail

/// Fixed-step state from z_1 and zbar_0.
inline SolverState init_fixed_state(const VIProblem& p, const Point& z1, const Point& zbar0,
                                    const FixedStepConfig& cfg) {
  SolverState s;
  s.z = z1;
  s.z_prev = z1;
  s.zbar = zbar0;
  s.F_z = p(z1);
  s.F_z_prev = s.F_z;
  s.lambda = s.lambda_prev = cfg.lambda;
  s.theta = cfg.phi;
  return s;
}

/// Adaptive state from z_0 and zbar_0: z_1 = zbar_0, theta_0 = 1.
inline SolverState init_adaptive_state(const VIProblem& p, const Point& z0, const Point& zbar0,
                                       const AdaptiveConfig& cfg) {
  SolverState s;
  s.z_prev = z0;
  s.z = zbar0;
  s.zbar = zbar0;
  s.F_z_prev = p(z0);
  s.F_z = p(zbar0);
  s.lambda = s.lambda_prev = cfg.lambda0;
  s.theta = 1.0;
  return s;
}

inline SolverState bgraal_step(const SolverState& state, const VIProblem& p, const Geometry& geom,
                               const FixedStepConfig& cfg, const ProxMap& prox) {
  SolverState next = detail::golden_update(state, p, geom, prox, cfg.lambda, cfg.phi);
  next.theta = cfg.phi;
  return next;
}

inline SolverState bgraal_step(const SolverState& state, const VIProblem& p, const Geometry& geom,
                               const FixedStepConfig& cfg) {
  return bgraal_step(state, p, geom, cfg, ProxMap(geom, p.constraint));
}

inline SolverState bagraal_step(const SolverState& state, const VIProblem& p, const Geometry& geom,
                                const AdaptiveConfig& cfg, const ProxMap& prox) {
  const double lambda =
      compute_step_size(state.lambda, state.theta, state.z, state.z_prev, state.F_z,
                        state.F_z_prev, geom.sigma(), cfg.phi, cfg.rho, cfg.lambda_max);
  SolverState next = detail::golden_update(state, p, geom, prox, lambda, cfg.phi);
  next.theta = lambda * cfg.phi / state.lambda;
  return next;
}

inline SolverState bagraal_step(const SolverState& state, const VIProblem& p, const Geometry& geom,
                                const AdaptiveConfig& cfg) {
  return bagraal_step(state, p, geom, cfg, ProxMap(geom, p.constraint));
}

/// J = (grad h(zbar) - grad h(z_next)) / lambda + F(z_next) - F(z), an element
/// of F(z_next) + dg(z_next).
inline Vector residual_J(const Point& zbar, const Point& z_next, const Vector& Fz,
                         const Vector& Fz_next, double lambda, const Geometry& geom) {
  if (!(lambda > 0.0)) throw ConfigError("residual_J needs lambda > 0");
  return (geom.gradient(zbar).coords - geom.gradient(z_next).coords) / lambda + (Fz_next - Fz);
}

/// Residual of the step that produced `s` (uses the step size of that step).
inline Vector residual_J(const SolverState& s, const Geometry& geom) {
  return residual_J(s.zbar, s.z, s.F_z_prev, s.F_z, s.lambda, geom);
}

enum class RunStatus { Converged, MaxIters, NumericalFailure };

inline std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxIters: return "max_iters";
    case RunStatus::NumericalFailure: return "numerical_failure";
  }
  return "?";
}

struct IterateRecord {
  long iter = 0;
  double lambda = 0.0;
  double theta = 0.0;
  double residual_sq = 0.0;
  double best_residual_sq = 0.0;
  std::int64_t elapsed_ns = 0;  // cumulative since the start of the run
  double step_dz_sq = 0.0;
  double step_dF_sq = 0.0;
};

struct IterateTrace {
  std::vector<IterateRecord> records;
  RunStatus status = RunStatus::MaxIters;
  std::string failure;  // message when status is NumericalFailure
  SolverState final_state;
  Point average_z;  // running mean of z_2, ..., z_{K+1}

  double best_residual_sq() const {
    return records.empty() ? std::numeric_limits<double>::infinity()
                           : records.back().best_residual_sq;
  }
};

struct RunOptions {
  bool record_timing = true;
  /// Called after every step with the new state (tests use it to watch iterates).
  std::function<void(const SolverState&)> observer;
};

namespace detail {

inline void check_start(const VIProblem& p, const Geometry& geom, const Point& z, const char* name) {
  if (z.size() != p.dimension()) throw ConfigError(std::string(name) + " has the wrong dimension");
  if (!geom.is_interior(z)) throw ConfigError(std::string(name) + " is not interior to dom h");
  const auto& c = p.constraint;
  if (c.kind == ConstraintKind::SimplexProduct) {
    Eigen::Index offset = 0;
    for (const auto& b : c.blocks) {
      const double sum = z.segment(offset, b.size).sum();
      if (std::abs(sum - b.scale) > 1e-9 * std::max(1.0, b.scale) || z.segment(offset, b.size).minCoeff() < 0.0)
        throw ConfigError(std::string(name) + " is not on the simplex");
      offset += b.size;
    }
  } else if (c.kind == ConstraintKind::Box) {
    if ((z.array() < c.lo.array()).any() || (z.array() > c.hi.array()).any())
      throw ConfigError(std::string(name) + " is outside the box");
  }
}

template <class Step>
IterateTrace run_loop(const VIProblem& p, const Geometry& geom, SolverState state, long max_iters,
                      double target, const RunOptions& opts, Step&& step) {
  using Clock = std::chrono::steady_clock;
  IterateTrace trace;
  trace.records.reserve(static_cast<std::size_t>(std::max(0L, std::min(max_iters, 1L << 20))));
  trace.average_z = Vector::Zero(p.dimension());
  double best = std::numeric_limits<double>::infinity();
  const auto start = Clock::now();
  for (long k = 1; k <= max_iters; ++k) {
    try {
      state = step(state);
      const double r = residual_J(state, geom).squaredNorm();
      if (!std::isfinite(r)) throw NumericalFailure("residual is not finite");
      best = std::min(best, r);
      IterateRecord rec;
      rec.iter = state.iter;
      rec.lambda = state.lambda;
      rec.theta = state.theta;
      rec.residual_sq = r;
      rec.best_residual_sq = best;
      rec.step_dz_sq = state.step_dz_sq;
      rec.step_dF_sq = state.step_dF_sq;
      if (opts.record_timing)
        rec.elapsed_ns =
            std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
      trace.records.push_back(rec);
      trace.average_z += (state.z - trace.average_z) / static_cast<double>(k);
      if (opts.observer) opts.observer(state);
    } catch (const NumericalFailure& e) {
      trace.status = RunStatus::NumericalFailure;
      trace.failure = e.what();
      break;
    } catch (const DomainError& e) {
      trace.status = RunStatus::NumericalFailure;
      trace.failure = e.what();
      break;
    }
    if (best <= target) {
      trace.status = RunStatus::Converged;
      break;
    }
  }
  trace.final_state = std::move(state);
  return trace;
}

}  // namespace detail

/// Fixed-step run from z_1 = z0 and zbar_0 = zbar0. The residual uses the
/// constant step size.
inline IterateTrace run(const VIProblem& p, const Geometry& geom, const FixedStepConfig& cfg,
                        const Point& z0, const Point& zbar0, const RunOptions& opts = {}) {
  cfg.validate(geom.sigma(), p.lipschitz_hint);
  const ProxMap prox(geom, p.constraint);
  detail::check_start(p, geom, z0, "z0");
  detail::check_start(p, geom, zbar0, "zbar0");
  return detail::run_loop(p, geom, init_fixed_state(p, z0, zbar0, cfg), cfg.max_iters,
                          cfg.target_residual_sq, opts, [&](const SolverState& s) {
                            return bgraal_step(s, p, geom, cfg, prox);
                          });
}

/// Adaptive run from z_0 = z0 and zbar_0 = zbar0 (so z_1 = zbar0).
inline IterateTrace run(const VIProblem& p, const Geometry& geom, const AdaptiveConfig& cfg,
                        const Point& z0, const Point& zbar0, const RunOptions& opts = {}) {
  cfg.validate();
  const ProxMap prox(geom, p.constraint);
  detail::check_start(p, geom, z0, "z0");
  detail::check_start(p, geom, zbar0, "zbar0");
  return detail::run_loop(p, geom, init_adaptive_state(p, z0, zbar0, cfg), cfg.max_iters,
                          cfg.target_residual_sq, opts, [&](const SolverState& s) {
                            return bagraal_step(s, p, geom, cfg, prox);
                          });
}

/// zbar_0 as a small multiplicative perturbation of z0, z0_i (1 + rel u_i) with
/// u_i uniform on [-1, 1], mapped back onto each simplex block by rescaling.
inline Point perturb_start(const Point& z0, const ConstraintSpec& c, std::uint64_t seed,
                           double relative = 1e-3) {
  Rng rng(derive_seed(seed, {0x7a6261ULL}));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Point z = z0;
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] *= 1.0 + relative * u(rng);
  if (c.kind == ConstraintKind::SimplexProduct) {
    Eigen::Index offset = 0;
    for (const auto& b : c.blocks) {
      auto seg = z.segment(offset, b.size);
      seg *= b.scale / seg.sum();
      offset += b.size;
    }
  } else if (c.kind == ConstraintKind::Box) {
    for (Eigen::Index i = 0; i < z.size(); ++i)
      z[i] = detail::nudge_inside(z[i], c.lo[i], c.hi[i]);
  }
  return z;
}

/// |z0 - zbar0|^2 / |F(z0) - F(zbar0)|^2 times a safety factor; 1 when F does
/// not change between the two points.
inline double default_lambda0(const VIProblem& p, const Point& z0, const Point& zbar0,
                              double factor = 1.0) {
  const double dF_sq = (p(z0) - p(zbar0)).squaredNorm();
  if (!(dF_sq > 0.0)) return 1.0;
  return factor * (z0 - zbar0).squaredNorm() / dF_sq;
}

}  // namespace vigraal
