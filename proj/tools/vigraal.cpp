// vigraal: run golden-ratio VI solvers on the benchmark families.
//
//   vigraal run   --problem P --geometry G --solver S --size N --iters K --reps R --seed S --out PATH
//   vigraal gen   --problem P --size N --seed S [--out PATH]
//   vigraal check [--seed S] [--samples N]
//
// Exit codes: 0 success, 1 I/O or check failure, 2 configuration error,
// 3 numerical failure in some repetition.

#include "vigraal/check_suite.hpp"
#include "vigraal/harness.hpp"
#include "vigraal/instance_io.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::optional<double> parse_auto(const std::string& flag, const std::string& value) {
  if (value == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw vigraal::ConfigError(flag + " expects a number or 'auto', got '" + value + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bregman golden-ratio algorithms for monotone variational inequalities"};
  app.require_subcommand(1);

  std::string problem = "matrix-game", geometry = "euclidean", solver = "adaptive";
  int size = 50, reps = 10;
  long iters = 1000;
  std::uint64_t seed = 0;
  std::string phi = "auto", rho = "auto", lambda0 = "auto", lambda0_factor = "auto";
  double lambda_max = 1e6, target = 0.0;
  std::string out_path, instance_path;
  bool no_timing = false;

  auto* run_cmd = app.add_subcommand("run", "Run an experiment and write per-iteration CSV");
  run_cmd->add_option("--problem", problem, "matrix-game | gaussian | cournot")
      ->check(CLI::IsMember({"matrix-game", "gaussian", "cournot"}));
  run_cmd->add_option("--geometry", geometry, "euclidean | kl | fermi-dirac | hellinger")
      ->check(CLI::IsMember({"euclidean", "kl", "fermi-dirac", "hellinger"}));
  run_cmd->add_option("--solver", solver, "fixed | adaptive")->check(CLI::IsMember({"fixed", "adaptive"}));
  run_cmd->add_option("--size", size, "Vertices, channels or firms");
  run_cmd->add_option("--iters", iters, "Iteration budget per repetition");
  run_cmd->add_option("--reps", reps, "Number of seeded repetitions");
  run_cmd->add_option("--seed", seed, "Base seed");
  run_cmd->add_option("--phi", phi, "Averaging constant (default 1.5 adaptive, golden ratio fixed)");
  run_cmd->add_option("--rho", rho, "Step growth cap (auto = 1/phi + 1/phi^2)");
  run_cmd->add_option("--lambda0", lambda0, "Initial (adaptive) or constant (fixed) step, or auto");
  run_cmd->add_option("--lambda0-factor", lambda0_factor, "Multiplier on lambda0 (auto: 1e-2 for gaussian+kl)");
  run_cmd->add_option("--lambda-max", lambda_max, "Upper bound on adaptive steps");
  run_cmd->add_option("--target", target, "Stop once the best squared residual reaches this");
  run_cmd->add_option("--instance", instance_path, "Replay an instance JSON written by 'gen'");
  run_cmd->add_flag("--no-timing", no_timing, "Write 0 in elapsed_ns so the CSV is byte-reproducible");
  run_cmd->add_option("--out", out_path, "CSV output path (metadata goes to PATH.json)")->required();

  std::string gen_problem = "matrix-game", gen_out;
  int gen_size = 50;
  std::uint64_t gen_seed = 0;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance and write it as JSON");
  gen_cmd->add_option("--problem", gen_problem)->check(CLI::IsMember({"matrix-game", "gaussian", "cournot"}));
  gen_cmd->add_option("--size", gen_size);
  gen_cmd->add_option("--seed", gen_seed);
  gen_cmd->add_option("--out", gen_out, "Output path (stdout when omitted)");

  std::uint64_t check_seed = 0;
  int check_samples = 1000;
  auto* check_cmd = app.add_subcommand("check", "Cross-check implementations against oracles");
  check_cmd->add_option("--seed", check_seed);
  check_cmd->add_option("--samples", check_samples);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      vigraal::RunConfig cfg;
      cfg.family = vigraal::parse_family(problem);
      cfg.geometry = vigraal::parse_geometry(geometry);
      cfg.solver = vigraal::parse_solver(solver);
      cfg.size = size;
      cfg.iters = iters;
      cfg.reps = reps;
      cfg.seed = seed;
      cfg.phi = parse_auto("--phi", phi);
      cfg.rho = parse_auto("--rho", rho);
      cfg.lambda0 = parse_auto("--lambda0", lambda0);
      cfg.lambda0_factor = parse_auto("--lambda0-factor", lambda0_factor);
      cfg.lambda_max = lambda_max;
      cfg.target_residual_sq = target;
      cfg.record_timing = !no_timing;
      if (!instance_path.empty()) {
        cfg.instance = vigraal::read_instance(instance_path);
        cfg.size = cfg.instance->size;
      }
      const auto artifact = vigraal::run_experiment(cfg);
      vigraal::emit_csv(artifact, out_path);
      {
        std::ofstream meta(out_path + ".json");
        if (!meta) throw std::runtime_error("cannot write '" + out_path + ".json'");
        meta << vigraal::artifact_metadata(artifact).dump(2) << '\n';
      }
      for (std::size_t r = 0; r < artifact.reps.size(); ++r) {
        const auto& t = artifact.reps[r].trace;
        std::fprintf(stderr, "rep %zu: %s after %zu iterations, best residual^2 %.3e\n", r,
                     std::string(vigraal::to_string(t.status)).c_str(), t.records.size(),
                     t.best_residual_sq());
      }
      return artifact.any_numerical_failure() ? kExitNumerical : 0;
    }
    if (*gen_cmd) {
      const auto inst = vigraal::generate_instance(vigraal::parse_family(gen_problem), gen_size, gen_seed);
      if (gen_out.empty()) std::cout << vigraal::instance_to_json(inst).dump(2) << '\n';
      else vigraal::write_instance(inst, gen_out);
      return 0;
    }
    if (*check_cmd) {
      bool ok = true;
      for (const auto& c : vigraal::run_check_suite(check_seed, check_samples)) {
        std::printf("%s  %-50s worst %.3e  tol %.1e\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                    c.worst, c.tolerance);
        ok = ok && c.passed;
      }
      return ok ? 0 : kExitIo;
    }
  } catch (const vigraal::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return 0;
}
