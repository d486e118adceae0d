#pragma once

// Benchmark experiments: seeded instances, per-family starting points and step
// sizes, solver dispatch, CSV and JSON output.

#include "vigraal/errors.hpp"
#include "vigraal/geometry.hpp"
#include "vigraal/instance_io.hpp"
#include "vigraal/problems.hpp"
#include "vigraal/random.hpp"
#include "vigraal/solvers.hpp"

#include "json.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace vigraal {

enum class SolverKind { Fixed, Adaptive };

inline std::string_view to_string(SolverKind s) { return s == SolverKind::Fixed ? "fixed" : "adaptive"; }

inline SolverKind parse_solver(std::string_view s) {
  if (s == "fixed") return SolverKind::Fixed;
  if (s == "adaptive") return SolverKind::Adaptive;
  throw ConfigError("unknown solver '" + std::string(s) + "'");
}

inline GeometryKind parse_geometry(std::string_view s) {
  if (s == "euclidean") return GeometryKind::Euclidean;
  if (s == "kl") return GeometryKind::NegativeEntropy;
  if (s == "fermi-dirac") return GeometryKind::FermiDiracBox;
  if (s == "hellinger") return GeometryKind::HellingerBox;
  throw ConfigError("unknown geometry '" + std::string(s) + "'");
}

struct RunConfig {
  ProblemFamily family = ProblemFamily::MatrixGame;
  GeometryKind geometry = GeometryKind::Euclidean;
  SolverKind solver = SolverKind::Adaptive;
  int size = 50;
  long iters = 1000;
  int reps = 10;
  std::uint64_t seed = 0;
  /// Unset: 1.5 for adaptive runs, the golden ratio for fixed-step runs.
  std::optional<double> phi;
  std::optional<double> rho;      // unset: 1/phi + 1/phi^2
  std::optional<double> lambda0;  // unset: family default (auto)
  /// Unset: 1e-2 for gaussian + kl, 1 otherwise. Multiplies lambda0.
  std::optional<double> lambda0_factor;
  double lambda_max = 1e6;
  double target_residual_sq = 0.0;
  bool record_timing = true;
  /// Replay a stored instance instead of generating one per repetition.
  std::optional<ProblemInstance> instance;

  void validate() const {
    if (size <= 0) throw ConfigError("--size must be positive");
    if (iters < 0) throw ConfigError("--iters must be >= 0");
    if (reps < 1) throw ConfigError("--reps must be >= 1");
    if (lambda0_factor && !(*lambda0_factor > 0.0)) throw ConfigError("--lambda0-factor must be > 0");
    if (instance && instance->family != family)
      throw ConfigError("instance family does not match --problem");
    const bool admissible = [&] {
      switch (family) {
        case ProblemFamily::MatrixGame:
        case ProblemFamily::Gaussian:
          return geometry == GeometryKind::Euclidean || geometry == GeometryKind::NegativeEntropy;
        case ProblemFamily::Cournot:
          return geometry != GeometryKind::NegativeEntropy;
      }
      return false;
    }();
    if (!admissible)
      throw ConfigError("geometry '" + std::string(to_string(geometry)) + "' has no prox for " +
                        std::string(to_string(family)) + " constraints");
    if (solver == SolverKind::Fixed && !lambda0 && family != ProblemFamily::MatrixGame)
      throw ConfigError("fixed-step runs need a Lipschitz constant; " + std::string(to_string(family)) +
                        " provides none (pass --lambda0 explicitly)");
  }
};

/// Parameters actually used by one repetition.
struct EffectiveParams {
  std::uint64_t instance_seed = 0;
  std::uint64_t start_seed = 0;
  double sigma = 0.0;
  double phi = 0.0;
  double rho = 0.0;          // adaptive only
  double lambda = 0.0;       // fixed step size, or lambda0 for adaptive runs
  double lambda0_factor = 1.0;
  std::optional<double> lipschitz;
};

struct RepetitionResult {
  ProblemInstance instance;
  EffectiveParams params;
  IterateTrace trace;
};

struct RunArtifact {
  RunConfig config;
  std::vector<RepetitionResult> reps;

  bool any_numerical_failure() const {
    for (const auto& r : reps)
      if (r.trace.status == RunStatus::NumericalFailure) return true;
    return false;
  }
};

inline Geometry make_geometry(GeometryKind kind, const ConstraintSpec& c) {
  switch (kind) {
    case GeometryKind::Euclidean: return Geometry::euclidean(c.n);
    case GeometryKind::NegativeEntropy:
      if (c.kind != ConstraintKind::SimplexProduct) throw ConfigError("kl geometry needs simplex constraints");
      return Geometry::negative_entropy(c.blocks);
    case GeometryKind::FermiDiracBox:
      if (c.kind != ConstraintKind::Box) throw ConfigError("fermi-dirac geometry needs a box constraint");
      return Geometry::fermi_dirac(c.lo, c.hi);
    case GeometryKind::HellingerBox:
      if (c.kind != ConstraintKind::Box) throw ConfigError("hellinger geometry needs a box constraint");
      return Geometry::hellinger(c.lo, c.hi);
  }
  throw ConfigError("unknown geometry");
}

/// Uniform point of each simplex block, or the box centre.
inline Point default_start(const ConstraintSpec& c) {
  switch (c.kind) {
    case ConstraintKind::SimplexProduct: {
      Point z(c.n);
      Eigen::Index offset = 0;
      for (const auto& b : c.blocks) {
        z.segment(offset, b.size).setConstant(b.scale / static_cast<double>(b.size));
        offset += b.size;
      }
      return z;
    }
    case ConstraintKind::Box: return (c.lo + c.hi) / 2.0;
    case ConstraintKind::Free: return Point::Zero(c.n);
  }
  throw ConfigError("unknown constraint kind");
}

/// Observer hook for tests: called with (rep, state) after every step.
using RepetitionObserver = std::function<void(int, const SolverState&)>;

inline RepetitionResult run_repetition(const RunConfig& cfg, int rep, const RepetitionObserver& observer = {}) {
  RepetitionResult out;
  const auto rep_index = static_cast<std::uint64_t>(rep);
  out.params.instance_seed = derive_seed(cfg.seed, {rep_index, 1});
  out.params.start_seed = derive_seed(cfg.seed, {rep_index, 2});
  out.instance = cfg.instance ? *cfg.instance : generate_instance(cfg.family, cfg.size, out.params.instance_seed);
  if (cfg.instance) out.params.instance_seed = cfg.instance->seed;

  const VIProblem problem = make_problem(out.instance);
  const Geometry geom = make_geometry(cfg.geometry, problem.constraint);
  const Point z0 = default_start(problem.constraint);
  const Point zbar0 = perturb_start(z0, problem.constraint, out.params.start_seed);
  out.params.sigma = geom.sigma();
  out.params.lipschitz = problem.lipschitz_hint;
  out.params.lambda0_factor =
      cfg.lambda0_factor.value_or(cfg.family == ProblemFamily::Gaussian &&
                                          cfg.geometry == GeometryKind::NegativeEntropy
                                      ? 1e-2
                                      : 1.0);
  RunOptions opts{cfg.record_timing, {}};
  if (observer) opts.observer = [&observer, rep](const SolverState& s) { observer(rep, s); };

  if (cfg.solver == SolverKind::Fixed) {
    FixedStepConfig fc;
    fc.phi = cfg.phi.value_or(golden_ratio);
    fc.max_iters = cfg.iters;
    fc.target_residual_sq = cfg.target_residual_sq;
    if (cfg.lambda0) {
      fc.lambda = *cfg.lambda0 * out.params.lambda0_factor;
    } else {
      if (!problem.lipschitz_hint) throw ConfigError("fixed-step run without a Lipschitz constant");
      fc.lambda = geom.sigma() * fc.phi / (2.0 * *problem.lipschitz_hint);
    }
    out.params.phi = fc.phi;
    out.params.lambda = fc.lambda;
    out.trace = run(problem, geom, fc, z0, zbar0, opts);
  } else {
    AdaptiveConfig ac;
    ac.phi = cfg.phi.value_or(1.5);
    ac.rho = cfg.rho.value_or(default_rho(ac.phi));
    ac.lambda_max = cfg.lambda_max;
    ac.max_iters = cfg.iters;
    ac.target_residual_sq = cfg.target_residual_sq;
    double base = 1.0;
    if (cfg.lambda0) base = *cfg.lambda0;
    else if (cfg.family != ProblemFamily::Cournot) base = default_lambda0(problem, z0, zbar0);
    ac.lambda0 = std::min(base * out.params.lambda0_factor, ac.lambda_max);
    out.params.phi = ac.phi;
    out.params.rho = ac.rho;
    out.params.lambda = ac.lambda0;
    out.trace = run(problem, geom, ac, z0, zbar0, opts);
  }
  return out;
}

/// Repetitions run in order; each draws its instance and start from (seed, rep).
inline RunArtifact run_experiment(const RunConfig& cfg, const RepetitionObserver& observer = {}) {
  cfg.validate();
  RunArtifact artifact;
  artifact.config = cfg;
  for (int r = 0; r < cfg.reps; ++r) artifact.reps.push_back(run_repetition(cfg, r, observer));
  return artifact;
}

inline constexpr std::string_view kCsvHeader =
    "rep,iter,lambda,theta,residual_sq,best_residual_sq,elapsed_ns";

inline void write_csv(const RunArtifact& artifact, std::ostream& out) {
  out << kCsvHeader << '\n';
  char line[256];
  for (std::size_t r = 0; r < artifact.reps.size(); ++r) {
    for (const auto& rec : artifact.reps[r].trace.records) {
      std::snprintf(line, sizeof line, "%zu,%ld,%.17g,%.17g,%.17g,%.17g,%" PRId64 "\n", r, rec.iter,
                    rec.lambda, rec.theta, rec.residual_sq, rec.best_residual_sq, rec.elapsed_ns);
      out << line;
    }
  }
}

inline std::string csv_string(const RunArtifact& artifact) {
  std::ostringstream s;
  write_csv(artifact, s);
  return s.str();
}

inline void emit_csv(const RunArtifact& artifact, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(artifact, out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

/// Config echo, per-repetition parameters, instances and summaries.
inline nlohmann::json artifact_metadata(const RunArtifact& artifact) {
  const RunConfig& c = artifact.config;
  nlohmann::json j;
  j["config"] = {
      {"problem", to_string(c.family)},
      {"geometry", to_string(c.geometry)},
      {"solver", to_string(c.solver)},
      {"size", c.size},
      {"iters", c.iters},
      {"reps", c.reps},
      {"seed", c.seed},
      {"lambda_max", c.lambda_max},
      {"target_residual_sq", c.target_residual_sq},
      {"timing", c.record_timing},
  };
  nlohmann::json reps = nlohmann::json::array();
  for (std::size_t r = 0; r < artifact.reps.size(); ++r) {
    const auto& rep = artifact.reps[r];
    const auto& rec = rep.trace.records;
    const std::int64_t total_ns = rec.empty() ? 0 : rec.back().elapsed_ns;
    nlohmann::json p = {
        {"rep", r},
        {"instance_seed", rep.params.instance_seed},
        {"start_seed", rep.params.start_seed},
        {"sigma", rep.params.sigma},
        {"phi", rep.params.phi},
        {c.solver == SolverKind::Fixed ? "lambda" : "lambda0", rep.params.lambda},
        {"lambda0_factor", rep.params.lambda0_factor},
        {"status", to_string(rep.trace.status)},
        {"iterations", rec.size()},
        {"final_best_residual_sq", rec.empty() ? nlohmann::json(nullptr) : nlohmann::json(rec.back().best_residual_sq)},
        {"total_ns", total_ns},
        {"mean_ns_per_iter", rec.empty() ? 0.0 : static_cast<double>(total_ns) / static_cast<double>(rec.size())},
        {"instance", instance_to_json(rep.instance)},
    };
    if (c.solver == SolverKind::Adaptive) p["rho"] = rep.params.rho;
    if (rep.params.lipschitz) p["lipschitz"] = *rep.params.lipschitz;
    if (!rep.trace.failure.empty()) p["failure"] = rep.trace.failure;
    reps.push_back(std::move(p));
  }
  j["repetitions"] = std::move(reps);
  return j;
}

}  // namespace vigraal
