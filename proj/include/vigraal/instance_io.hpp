#pragma once

// Instance <-> JSON. Doubles are written in shortest round-trip form, so a
// parsed instance reproduces the generated one bit for bit.
//
//   { "schema": 1, "family": "matrix-game" | "gaussian" | "cournot",
//     "size": int, "seed": uint64, ...family fields }
//   matrix-game: "n", "graph_seed", "edges": [[u, v], ...], "M": [[...], ...]
//   gaussian:    "m", "P", "N", "beta": [...], "mu": [...]
//   cournot:     "Nf", "a", "b", "c": [...], "C": [...]

#include "vigraal/errors.hpp"
#include "vigraal/problems.hpp"

#include "json.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace vigraal {

inline constexpr int kInstanceSchema = 1;

namespace detail {

inline nlohmann::json vector_json(const Vector& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

inline Vector json_vector(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace detail

inline nlohmann::json instance_to_json(const ProblemInstance& inst) {
  nlohmann::json j;
  j["schema"] = kInstanceSchema;
  j["family"] = std::string(to_string(inst.family));
  j["size"] = inst.size;
  j["seed"] = inst.seed;
  if (const auto* mg = std::get_if<MatrixGameInstance>(&inst.data)) {
    j["n"] = mg->n;
    j["graph_seed"] = mg->graph_seed;
    nlohmann::json edges = nlohmann::json::array();
    for (auto [u, v] : mg->graph.edges) edges.push_back({u, v});
    j["edges"] = std::move(edges);
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < mg->M.rows(); ++r) rows.push_back(detail::vector_json(mg->M.row(r)));
    j["M"] = std::move(rows);
  } else if (const auto* g = std::get_if<GaussianChannelInstance>(&inst.data)) {
    j["m"] = g->m;
    j["P"] = g->P;
    j["N"] = g->N;
    j["beta"] = detail::vector_json(g->beta);
    j["mu"] = detail::vector_json(g->mu);
  } else if (const auto* c = std::get_if<CournotInstance>(&inst.data)) {
    j["Nf"] = c->Nf;
    j["a"] = c->a;
    j["b"] = c->b;
    j["c"] = detail::vector_json(c->c);
    j["C"] = detail::vector_json(c->C);
  }
  return j;
}

inline ProblemInstance instance_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<int>() != kInstanceSchema) throw ConfigError("unsupported instance schema");
    ProblemInstance inst;
    inst.family = parse_family(j.at("family").get<std::string>());
    inst.size = j.at("size").get<int>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    switch (inst.family) {
      case ProblemFamily::MatrixGame: {
        MatrixGameInstance mg;
        mg.n = j.at("n").get<int>();
        mg.graph_seed = j.at("graph_seed").get<std::uint64_t>();
        mg.graph.n = mg.n;
        for (const auto& e : j.at("edges")) mg.graph.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        const auto& rows = j.at("M");
        mg.M.resize(mg.n, mg.n);
        if (static_cast<int>(rows.size()) != mg.n) throw ConfigError("matrix row count differs from n");
        for (int r = 0; r < mg.n; ++r) {
          const Vector row = detail::json_vector(rows[r]);
          if (row.size() != mg.n) throw ConfigError("matrix row length differs from n");
          mg.M.row(r) = row;
        }
        inst.data = std::move(mg);
        break;
      }
      case ProblemFamily::Gaussian: {
        GaussianChannelInstance g;
        g.m = j.at("m").get<int>();
        g.P = j.at("P").get<double>();
        g.N = j.at("N").get<double>();
        g.beta = detail::json_vector(j.at("beta"));
        g.mu = detail::json_vector(j.at("mu"));
        if (g.beta.size() != g.m || g.mu.size() != g.m) throw ConfigError("channel arrays differ from m");
        inst.data = std::move(g);
        break;
      }
      case ProblemFamily::Cournot: {
        CournotInstance c;
        c.Nf = j.at("Nf").get<int>();
        c.a = j.at("a").get<double>();
        c.b = j.at("b").get<double>();
        c.c = detail::json_vector(j.at("c"));
        c.C = detail::json_vector(j.at("C"));
        if (c.c.size() != c.Nf || c.C.size() != c.Nf) throw ConfigError("firm arrays differ from Nf");
        inst.data = std::move(c);
        break;
      }
    }
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed instance JSON: ") + e.what());
  }
}

inline void write_instance(const ProblemInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << instance_to_json(inst).dump(2) << '\n';
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

inline ProblemInstance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open instance file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
  return instance_from_json(j);
}

}  // namespace vigraal
