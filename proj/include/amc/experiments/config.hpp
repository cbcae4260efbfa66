#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "amc/error.hpp"
#include "amc/linalg/types.hpp"

namespace amc::experiments {

using linalg::Index;

struct DatasetSpec {
  std::string kind = "synthetic";  // synthetic | file
  // synthetic
  Index m = 60;
  Index n = 40;
  Index row_communities = 4;
  Index col_communities = 4;
  double noise_sigma = 0.0;
  double p_in = 0.5;
  double p_out = 0.02;
  std::optional<std::uint64_t> seed;  // fixed instance; otherwise the run seed
  // file
  std::string ratings;
  std::string truth;  // optional dense CSV scored instead of held-out ratings
};

struct GraphSpec {
  std::string source = "provided";  // provided | g1_features | g2_content
  std::string row_graph;            // edge lists (provided, file datasets)
  std::string col_graph;
  std::string row_features;  // dense CSV, one node per line (g1_features)
  std::string col_features;
  Index knn_k = 10;
};

struct SplitFractions {
  double initial = 0.0;
  double pool = 1.0;
  double eval = 0.0;
};

struct MethodSpec {
  std::string method;  // gcs | igcs | random | aopt
  std::string label;   // metrics key; defaults to method
  double alpha = 0.1;
  double beta = 0.1;
  double q = 0.5;
  Index zeta = 1;
  Index pool = 10;  // A-opt local pool size
  Index k1 = 4;
  Index k2 = 4;
  bool warm_start = true;
};

struct CompletionSpec {
  double alpha = 0.1;
  double beta = 0.1;
  double tol = 1e-8;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  GraphSpec graphs;
  SplitFractions split;
  std::vector<MethodSpec> methods;
  std::vector<Index> budgets;            // absolute K
  std::vector<double> budget_fractions;  // of m*n; ignored when budgets is set
  std::vector<std::uint64_t> seeds{0};
  CompletionSpec completion;
  std::string output_dir;  // empty: no artifacts

  void validate() const {
    const auto frac = [](double f) { return f >= 0.0 && f <= 1.0; };
    if (!frac(split.initial) || !frac(split.pool) || !frac(split.eval) ||
        split.initial + split.pool + split.eval > 1.0 + 1e-12)
      throw InvalidArgument("config: split fractions must lie in [0,1] and sum to <= 1");
    if (methods.empty()) throw InvalidArgument("config: no methods");
    if (budgets.empty() && budget_fractions.empty()) throw InvalidArgument("config: no budgets");
    for (double f : budget_fractions)
      if (!(f > 0.0 && f <= 1.0)) throw InvalidArgument("config: budget fractions must lie in (0,1]");
    if (seeds.empty()) throw InvalidArgument("config: no seeds");
    std::set<std::string> labels;
    for (const auto& m : methods) {
      if (m.method != "gcs" && m.method != "igcs" && m.method != "random" && m.method != "aopt")
        throw InvalidArgument("config: unknown method `" + m.method + "`");
      if (!labels.insert(m.label).second) throw InvalidArgument("config: duplicate method label `" + m.label + "`");
    }
    if (dataset.kind != "synthetic" && dataset.kind != "file")
      throw InvalidArgument("config: dataset kind must be synthetic or file");
    if (dataset.kind == "file" && dataset.ratings.empty()) throw InvalidArgument("config: dataset.ratings missing");
    if (graphs.source == "provided") {
      if (dataset.kind == "file" && (graphs.row_graph.empty() || graphs.col_graph.empty()))
        throw InvalidArgument("config: provided graphs need graphs.row_graph and graphs.col_graph");
    } else if (graphs.source == "g1_features") {
      if (graphs.row_features.empty() || graphs.col_features.empty())
        throw InvalidArgument("config: g1_features needs graphs.row_features and graphs.col_features");
    } else if (graphs.source != "g2_content") {
      throw InvalidArgument("config: graph source must be provided, g1_features or g2_content");
    }
  }

  /// Absolute budgets for an m x n matrix; absolute values win over fractions.
  std::vector<Index> resolve_budgets(Index mn) const {
    if (!budgets.empty()) return budgets;
    std::vector<Index> out;
    for (double f : budget_fractions) out.push_back(Index(std::llround(f * double(mn))));
    return out;
  }
};

namespace detail {

template <class T>
void get_to(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

inline std::string resolve_path(const std::string& p, const std::filesystem::path& base) {
  if (p.empty() || base.empty() || std::filesystem::path(p).is_absolute()) return p;
  return (base / p).lexically_normal().string();
}

}  // namespace detail

/// Reads a JSON config. Method entries inherit top-level alpha/beta; relative
/// paths resolve against `base_dir`.
inline ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  using detail::get_to;
  ExperimentConfig c;
  try {
    if (j.contains("dataset")) {
      const auto& d = j.at("dataset");
      get_to(d, "kind", c.dataset.kind);
      get_to(d, "m", c.dataset.m);
      get_to(d, "n", c.dataset.n);
      get_to(d, "row_communities", c.dataset.row_communities);
      get_to(d, "col_communities", c.dataset.col_communities);
      get_to(d, "noise_sigma", c.dataset.noise_sigma);
      get_to(d, "p_in", c.dataset.p_in);
      get_to(d, "p_out", c.dataset.p_out);
      if (d.contains("seed")) c.dataset.seed = d.at("seed").get<std::uint64_t>();
      get_to(d, "ratings", c.dataset.ratings);
      get_to(d, "truth", c.dataset.truth);
    }
    if (j.contains("graphs")) {
      const auto& g = j.at("graphs");
      get_to(g, "source", c.graphs.source);
      get_to(g, "row_graph", c.graphs.row_graph);
      get_to(g, "col_graph", c.graphs.col_graph);
      get_to(g, "row_features", c.graphs.row_features);
      get_to(g, "col_features", c.graphs.col_features);
      get_to(g, "knn_k", c.graphs.knn_k);
    }
    if (j.contains("split")) {
      const auto& s = j.at("split");
      get_to(s, "initial", c.split.initial);
      get_to(s, "pool", c.split.pool);
      get_to(s, "eval", c.split.eval);
    }
    const double alpha = j.value("alpha", 0.1), beta = j.value("beta", 0.1);
    c.completion.alpha = alpha;
    c.completion.beta = beta;
    if (j.contains("completion")) {
      const auto& s = j.at("completion");
      get_to(s, "alpha", c.completion.alpha);
      get_to(s, "beta", c.completion.beta);
      get_to(s, "tol", c.completion.tol);
    }
    for (const auto& mj : j.value("methods", nlohmann::json::array())) {
      MethodSpec m;
      m.alpha = alpha;
      m.beta = beta;
      if (mj.is_string()) {
        m.method = mj.get<std::string>();
      } else {
        get_to(mj, "method", m.method);
        get_to(mj, "label", m.label);
        get_to(mj, "alpha", m.alpha);
        get_to(mj, "beta", m.beta);
        get_to(mj, "q", m.q);
        get_to(mj, "zeta", m.zeta);
        get_to(mj, "pool", m.pool);
        get_to(mj, "k1", m.k1);
        get_to(mj, "k2", m.k2);
        get_to(mj, "warm_start", m.warm_start);
      }
      if (m.label.empty()) m.label = m.method;
      c.methods.push_back(m);
    }
    get_to(j, "budgets", c.budgets);
    get_to(j, "budget_fractions", c.budget_fractions);
    get_to(j, "seeds", c.seeds);
    get_to(j, "output_dir", c.output_dir);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  c.dataset.ratings = detail::resolve_path(c.dataset.ratings, base_dir);
  c.dataset.truth = detail::resolve_path(c.dataset.truth, base_dir);
  c.graphs.row_graph = detail::resolve_path(c.graphs.row_graph, base_dir);
  c.graphs.col_graph = detail::resolve_path(c.graphs.col_graph, base_dir);
  c.graphs.row_features = detail::resolve_path(c.graphs.row_features, base_dir);
  c.graphs.col_features = detail::resolve_path(c.graphs.col_features, base_dir);
  c.output_dir = detail::resolve_path(c.output_dir, base_dir);
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
  return config_from_json(j, std::filesystem::path(path).parent_path());
}

}  // namespace amc::experiments
