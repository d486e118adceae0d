#pragma once

// Benchmark problem families:
//   matrix-game  server placement on a random graph, min_x max_y <Mx, y> over two unit simplices
//   gaussian     worst-case power allocation, max_p min_n sum log(1 + beta p/(mu + n))
//   cournot      Nash equilibrium of a capacity-constrained Cournot oligopoly

#include "vigraal/errors.hpp"
#include "vigraal/random.hpp"
#include "vigraal/spectral_norm.hpp"
#include "vigraal/types.hpp"
#include "vigraal/vi_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <random>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace vigraal {

enum class ProblemFamily { MatrixGame, Gaussian, Cournot };

inline std::string_view to_string(ProblemFamily f) {
  switch (f) {
    case ProblemFamily::MatrixGame: return "matrix-game";
    case ProblemFamily::Gaussian: return "gaussian";
    case ProblemFamily::Cournot: return "cournot";
  }
  return "?";
}

inline ProblemFamily parse_family(std::string_view s) {
  if (s == "matrix-game") return ProblemFamily::MatrixGame;
  if (s == "gaussian") return ProblemFamily::Gaussian;
  if (s == "cournot") return ProblemFamily::Cournot;
  throw ConfigError("unknown problem family '" + std::string(s) + "'");
}

/// Undirected, unweighted graph on vertices 0..n-1.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

/// Hop-count distance matrix by breadth-first search from every vertex.
inline Matrix graph_distance_matrix(const Graph& g) {
  if (g.n <= 0) throw ConfigError("graph needs at least one vertex");
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n));
  for (auto [u, v] : g.edges) {
    if (u < 0 || v < 0 || u >= g.n || v >= g.n) throw ConfigError("edge endpoint out of range");
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  Matrix D(g.n, g.n);
  std::vector<int> dist(static_cast<std::size_t>(g.n));
  for (int s = 0; s < g.n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<int> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adj[u])
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          q.push(v);
        }
    }
    for (int t = 0; t < g.n; ++t) {
      if (dist[t] < 0) throw ConfigError("graph is disconnected: infinite distance");
      D(s, t) = dist[t];
    }
  }
  return D;
}

struct MatrixGameInstance {
  Matrix M;
  int n = 0;
  std::uint64_t graph_seed = 0;
  Graph graph;
};

struct GaussianChannelInstance {
  int m = 0;
  Vector beta;
  Vector mu;
  double P = 500.0;
  double N = 50.0;
};

struct CournotInstance {
  int Nf = 0;
  double a = 0.0;
  double b = 0.0;
  Vector c;  // unit costs
  Vector C;  // capacities
};

struct ProblemInstance {
  ProblemFamily family = ProblemFamily::MatrixGame;
  int size = 0;
  std::uint64_t seed = 0;
  std::variant<MatrixGameInstance, GaussianChannelInstance, CournotInstance> data;
};

// ---------------------------------------------------------------------------
// Operators

inline VIProblem matrix_game_problem(const MatrixGameInstance& inst) {
  const Matrix& M = inst.M;
  if (M.rows() != M.cols() || M.rows() == 0) throw ConfigError("matrix game needs a square matrix");
  const Eigen::Index n = M.rows();
  SaddlePointSpec spec{
      [M](const Vector&, const Vector& y) -> Vector { return M.transpose() * y; },
      [M](const Vector& x, const Vector&) -> Vector { return M * x; },
      ConstraintSpec::simplex_product({SimplexBlock{n, 1.0}}),
      ConstraintSpec::simplex_product({SimplexBlock{n, 1.0}}),
  };
  VIProblem p = saddle_to_vi(std::move(spec));
  p.lipschitz_hint = spectral_norm(M);
  return p;
}

inline double gaussian_capacity(const Vector& p, const Vector& n, const GaussianChannelInstance& inst) {
  double total = 0.0;
  for (int i = 0; i < inst.m; ++i)
    total += std::log1p(inst.beta[i] * p[i] / (inst.mu[i] + n[i]));
  return total;
}

/// dC/dp_i = beta_i / (mu_i + n_i + beta_i p_i)
inline Vector gaussian_grad_power(const Vector& p, const Vector& n, const GaussianChannelInstance& inst) {
  return inst.beta.array() / (inst.mu.array() + n.array() + inst.beta.array() * p.array());
}

/// dC/dn_i = -beta_i p_i / ((mu_i + n_i)(mu_i + n_i + beta_i p_i))
inline Vector gaussian_grad_noise(const Vector& p, const Vector& n, const GaussianChannelInstance& inst) {
  const auto s = inst.mu.array() + n.array();
  return -(inst.beta.array() * p.array()) / (s * (s + inst.beta.array() * p.array()));
}

/// z = (p, n) over Delta_P x Delta_N. Power maximises and noise minimises C, so
/// the game is min_p max_n -C and F(p, n) = (-dC/dp, dC/dn).
inline VIProblem gaussian_problem(const GaussianChannelInstance& inst) {
  const Eigen::Index m = inst.m;
  SaddlePointSpec spec{
      [inst](const Vector& p, const Vector& n) -> Vector { return -gaussian_grad_power(p, n, inst); },
      [inst](const Vector& p, const Vector& n) -> Vector { return -gaussian_grad_noise(p, n, inst); },
      ConstraintSpec::simplex_product({SimplexBlock{m, inst.P}}),
      ConstraintSpec::simplex_product({SimplexBlock{m, inst.N}}),
  };
  return saddle_to_vi(std::move(spec));
}

/// u_i(x) = x_i (a - b x_T) - c_i x_i
inline double cournot_utility(const CournotInstance& inst, const Vector& x, int i) {
  return x[i] * (inst.a - inst.b * x.sum()) - inst.c[i] * x[i];
}

/// F_i(x) = -du_i/dx_i = b x_T + b x_i + c_i - a on the box [0, C].
inline VIProblem cournot_problem(const CournotInstance& inst) {
  const Eigen::Index n = inst.Nf;
  OperatorFn F = [inst](const Point& x) -> Vector {
    const double total = x.sum();
    return (inst.b * total + inst.b * x.array() + inst.c.array() - inst.a).matrix();
  };
  return VIProblem{std::move(F), ConstraintSpec::box(Vector::Zero(n), inst.C), std::nullopt};
}

inline VIProblem make_problem(const ProblemInstance& inst) {
  return std::visit(
      [](const auto& d) -> VIProblem {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, MatrixGameInstance>) return matrix_game_problem(d);
        else if constexpr (std::is_same_v<T, GaussianChannelInstance>) return gaussian_problem(d);
        else return cournot_problem(d);
      },
      inst.data);
}

// ---------------------------------------------------------------------------
// Instance generators

struct CournotLogNormal {
  double a_log_mean = 2.0, a_log_sigma = 1.0;
  double b_log_mean = 0.0, b_log_sigma = 1.0;
  double C_log_mean = 2.0, C_log_sigma = 1.0;
};

inline bool graph_connected(const Graph& g) {
  try {
    graph_distance_matrix(g);
    return true;
  } catch (const ConfigError&) {
    return false;
  }
}

/// Erdos-Renyi graph with edge probability 2 ln n / n, resampled until connected.
inline MatrixGameInstance generate_matrix_game(int n, std::uint64_t seed) {
  if (n <= 0) throw ConfigError("matrix game size must be positive");
  const double prob = n > 1 ? std::min(1.0, 2.0 * std::log(static_cast<double>(n)) / n) : 0.0;
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t graph_seed = derive_seed(seed, {attempt});
    Rng rng(graph_seed);
    std::bernoulli_distribution edge(prob);
    Graph g{n, {}};
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (edge(rng)) g.edges.emplace_back(i, j);
    if (!graph_connected(g)) continue;
    MatrixGameInstance inst;
    inst.M = graph_distance_matrix(g);
    inst.n = n;
    inst.graph_seed = graph_seed;
    inst.graph = std::move(g);
    return inst;
  }
}

/// beta uniform on (0, P], mu uniform on (1, N + 1].
inline GaussianChannelInstance generate_gaussian(int m, std::uint64_t seed, double P = 500.0,
                                                 double N = 50.0) {
  if (m <= 0) throw ConfigError("channel count must be positive");
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);  // [0, 1)
  GaussianChannelInstance inst;
  inst.m = m;
  inst.P = P;
  inst.N = N;
  inst.beta.resize(m);
  inst.mu.resize(m);
  for (int i = 0; i < m; ++i) inst.beta[i] = P * (1.0 - unit(rng));
  for (int i = 0; i < m; ++i) inst.mu[i] = 1.0 + N * (1.0 - unit(rng));
  return inst;
}

/// a, b, C log-normal; c_i uniform on [C_i/100, C_i/5]. Draws with some
/// c_i >= a are discarded and redrawn.
inline CournotInstance generate_cournot(int Nf, std::uint64_t seed, const CournotLogNormal& ln = {}) {
  if (Nf <= 0) throw ConfigError("firm count must be positive");
  Rng rng(seed);
  std::lognormal_distribution<double> a_dist(ln.a_log_mean, ln.a_log_sigma);
  std::lognormal_distribution<double> b_dist(ln.b_log_mean, ln.b_log_sigma);
  std::lognormal_distribution<double> C_dist(ln.C_log_mean, ln.C_log_sigma);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CournotInstance inst;
  inst.Nf = Nf;
  inst.c.resize(Nf);
  inst.C.resize(Nf);
  for (;;) {
    inst.a = a_dist(rng);
    inst.b = b_dist(rng);
    for (int i = 0; i < Nf; ++i) {
      inst.C[i] = C_dist(rng);
      const double lo = inst.C[i] / 100.0, hi = inst.C[i] / 5.0;
      inst.c[i] = lo + (hi - lo) * unit(rng);
    }
    if ((inst.c.array() < inst.a).all()) return inst;
  }
}

inline ProblemInstance generate_instance(ProblemFamily family, int size, std::uint64_t seed) {
  ProblemInstance inst;
  inst.family = family;
  inst.size = size;
  inst.seed = seed;
  switch (family) {
    case ProblemFamily::MatrixGame: inst.data = generate_matrix_game(size, seed); break;
    case ProblemFamily::Gaussian: inst.data = generate_gaussian(size, seed); break;
    case ProblemFamily::Cournot: inst.data = generate_cournot(size, seed); break;
  }
  return inst;
}

}  // namespace vigraal
