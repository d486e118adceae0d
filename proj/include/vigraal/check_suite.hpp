#pragma once

// Oracle cross-checks behind `vigraal check`: each line compares an
// implementation against its independent reference on random inputs.

#include "vigraal/geometry.hpp"
#include "vigraal/oracles.hpp"
#include "vigraal/problems.hpp"
#include "vigraal/projections.hpp"
#include "vigraal/random.hpp"
#include "vigraal/vi_core.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace vigraal {

struct CheckResult {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

inline std::vector<CheckResult> run_check_suite(std::uint64_t seed, int samples) {
  std::vector<CheckResult> out;
  Rng rng(derive_seed(seed, {0xc4ecULL}));
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> pos(1e-3, 10.0), any(-3.0, 3.0), scale(0.1, 10.0);

  auto record = [&](std::string name, double worst, double tol) {
    out.push_back({std::move(name), worst, tol, worst <= tol});
  };

  {
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
      Vector x(dim(rng));
      for (auto& v : x) v = pos(rng);
      const double T = scale(rng);
      const auto r = oracles::compare("kl", oracles::kl_projection_oracle(x, T), project_simplex_kl(x, T), 1e-10);
      worst = std::max(worst, r.max_abs_deviation);
    }
    record("kl simplex projection vs multiplier bisection", worst, 1e-10);
  }
  {
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
      Vector x(dim(rng));
      for (auto& v : x) v = any(rng);
      const double T = scale(rng);
      const auto r = oracles::compare("euclid", oracles::euclidean_projection_oracle(x, T),
                                      project_simplex_euclidean(x, T), 1e-8);
      worst = std::max(worst, r.max_abs_deviation);
    }
    record("euclidean simplex projection vs active-set scan", worst, 1e-8);
  }
  {
    double worst = 0.0;
    for (int s = 0; s < samples / 10 + 1; ++s) {
      const auto inst = generate_gaussian(4, derive_seed(seed, {0x6761ULL, static_cast<std::uint64_t>(s)}));
      const VIProblem p = gaussian_problem(inst);
      Rng prng(derive_seed(seed, {0x7074ULL, static_cast<std::uint64_t>(s)}));
      const Point z = sample_interior(p.constraint, prng);
      auto potential = [&](const Vector& w) { return -gaussian_capacity(w.head(4), w.tail(4), inst); };
      Vector fd = oracles::finite_difference_gradient(potential, z, 1e-6);
      fd.tail(4) = -fd.tail(4);  // the noise block carries +dC/dn
      const Vector F = p(z);
      worst = std::max(worst, ((F - fd).array().abs() / (1.0 + F.array().abs())).maxCoeff());
    }
    record("gaussian operator vs central differences", worst, 1e-6);
  }
  {
    double worst = 0.0;
    for (int nf = 1; nf <= 10; ++nf) {
      CournotInstance inst{nf, 10.0, 1.0, Vector::Constant(nf, 4.0), Vector::Constant(nf, 10.0)};
      const Vector x = oracles::cournot_equilibrium_oracle(inst);
      const double analytic = (inst.a - 4.0) / (inst.b * (nf + 1));
      worst = std::max(worst, (x.array() - analytic).abs().maxCoeff());
    }
    record("cournot best response vs symmetric closed form", worst, 1e-9);
  }
  {
    double worst = 0.0;
    for (int n = 1; n <= 12; ++n) {
      const auto inst = generate_matrix_game(n, derive_seed(seed, {0x6d67ULL, static_cast<std::uint64_t>(n)}));
      const VIProblem p = matrix_game_problem(inst);
      const auto rep = monotonicity_check(p, 50, seed + static_cast<std::uint64_t>(n));
      worst = std::max(worst, std::abs(rep.min_inner));
    }
    record("matrix game operator is skew (<dF, dz> = 0)", worst, 1e-10);
  }
  return out;
}

}  // namespace vigraal
