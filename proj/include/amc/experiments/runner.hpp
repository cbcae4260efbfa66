#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "amc/completion.hpp"
#include "amc/experiments/config.hpp"
#include "amc/experiments/metrics.hpp"
#include "amc/experiments/ratings_io.hpp"
#include "amc/experiments/split.hpp"
#include "amc/graphs.hpp"
#include "amc/sampling.hpp"

namespace amc::experiments {

using linalg::DenseMatrix;

/// Ratings plus the factor graphs attached to them.
struct Dataset {
  RatingMatrix observed;
  std::optional<DenseMatrix> truth;  // scored instead of observed when present
  std::optional<graphs::GraphLaplacian> row_graph;
  std::optional<graphs::GraphLaplacian> col_graph;
};

inline Dataset load_dataset(const DatasetSpec& d, std::uint64_t run_seed) {
  Dataset out;
  if (d.kind == "synthetic") {
    graphs::SyntheticOptions so;
    so.p_in = d.p_in;
    so.p_out = d.p_out;
    auto s = graphs::synthetic_netflix(d.m, d.n, d.row_communities, d.col_communities, d.noise_sigma,
                                       d.seed.value_or(run_seed), so);
    out.observed = std::move(s.observed);
    out.truth = std::move(s.truth);
    out.row_graph = std::move(s.rows.graph);
    out.col_graph = std::move(s.cols.graph);
  } else {
    out.observed = load_ratings(d.ratings);
    if (!d.truth.empty()) {
      out.truth = completion::load_matrix_csv(d.truth);
      if (out.truth->rows() != Eigen::Index(out.observed.m()) || out.truth->cols() != Eigen::Index(out.observed.n()))
        throw DimensionError("dataset: truth shape does not match the ratings");
    }
  }
  return out;
}

/// Row and column graphs for one run. Content graphs see Gamma only.
inline std::pair<graphs::GraphLaplacian, graphs::GraphLaplacian> build_graphs(const GraphSpec& g, const Dataset& data,
                                                                              const RatingMatrix& gamma) {
  std::pair<graphs::GraphLaplacian, graphs::GraphLaplacian> out;
  if (g.source == "provided") {
    out.first = !g.row_graph.empty() ? graphs::laplacian_from_weights(linalg::load_edge_list(g.row_graph))
                                     : data.row_graph.value();
    out.second = !g.col_graph.empty() ? graphs::laplacian_from_weights(linalg::load_edge_list(g.col_graph))
                                      : data.col_graph.value();
  } else if (g.source == "g1_features") {
    out.first = graphs::knn_feature_graph(completion::load_matrix_csv(g.row_features), g.knn_k);
    out.second = graphs::knn_feature_graph(completion::load_matrix_csv(g.col_features), g.knn_k);
  } else {
    out.first = graphs::content_graph(gamma, graphs::Axis::rows).graph;
    out.second = graphs::content_graph(gamma, graphs::Axis::cols).graph;
  }
  if (out.first.n() != data.observed.m() || out.second.n() != data.observed.n())
    throw DimensionError("graphs: sizes " + std::to_string(out.first.n()) + "x" + std::to_string(out.second.n()) +
                         " do not match the ratings " + std::to_string(data.observed.m()) + "x" +
                         std::to_string(data.observed.n()));
  return out;
}

struct SamplerRun {
  sampling::SampleSet samples;
  std::vector<std::size_t> iter_counts;
  double wall_time_seconds = 0.0;
};

/// One sampler call; `op` already carries Gamma, `allowed` is the pool.
inline SamplerRun run_sampler(const MethodSpec& m, const graphs::ProductOperator& op, Index k,
                              const sampling::IndexMask& allowed, std::uint64_t seed) {
  SamplerRun out;
  linalg::SolverOptions eig = linalg::lobpcg_defaults();
  eig.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  if (m.method == "gcs") {
    sampling::GcsOptions o;
    o.eig = eig;
    o.warm_start = m.warm_start;
    auto r = sampling::gcs_sample(op, k, &allowed, o);
    out.samples = std::move(r.samples);
    out.iter_counts = std::move(r.state.iter_counts);
  } else if (m.method == "igcs") {
    sampling::IgcsOptions o;
    o.q = m.q;
    o.zeta = m.zeta;
    o.eig = eig;
    auto r = sampling::igcs_sample(op, k, &allowed, o);
    out.samples = std::move(r.samples);
    out.iter_counts = std::move(r.iter_counts);
  } else if (m.method == "random") {
    out.samples = sampling::random_sample(op.m(), op.n(), allowed, k, seed);
  } else if (m.method == "aopt") {
    const auto basis = sampling::bandlimited_basis(op.row_graph(), op.col_graph(), m.k1, m.k2);
    sampling::AoptOptions o;
    o.pool = m.pool;
    o.gcs.eig = eig;
    o.gcs.warm_start = m.warm_start;
    auto r = sampling::aopt_local_search(basis, op, k, o, &allowed);
    out.samples = std::move(r.samples);
    out.iter_counts = std::move(r.iter_counts);
  } else {
    throw InvalidArgument("unknown method `" + m.method + "`");
  }
  out.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

struct ExperimentResult {
  std::vector<MetricsRow> rows;  // sorted by (method, seed, K)
  std::vector<FailureRow> failures;
};

/// Every (seed, budget, method) cell: split, build graphs, sample from the
/// pool on top of Gamma, complete from Gamma + samples, score on the entries
/// never revealed (eval + unsampled pool). Wall time covers sampling only.
/// A failing cell becomes a FailureRow; the others proceed.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  const bool write = !cfg.output_dir.empty();
  if (write) std::filesystem::create_directories(std::filesystem::path(cfg.output_dir) / "samples");

  for (std::uint64_t seed : cfg.seeds) {
    const auto fail_all = [&](const std::string& what, const std::vector<Index>& budgets) {
      for (const auto& m : cfg.methods)
        for (Index k : budgets) res.failures.push_back({m.label, seed, k, what});
    };
    Dataset data;
    DatasetSplit split;
    std::pair<graphs::GraphLaplacian, graphs::GraphLaplacian> g;
    std::vector<Index> budgets;
    try {
      data = load_dataset(cfg.dataset, seed);
      budgets = cfg.resolve_budgets(data.observed.m() * data.observed.n());
      split = split_dataset(data.observed, cfg.split, seed);
      g = build_graphs(cfg.graphs, data, restrict_ratings(data.observed, split.initial));
    } catch (const std::exception& e) {
      fail_all(std::string("setup: ") + e.what(), budgets.empty() ? cfg.budgets : budgets);
      continue;
    }
    const Index m = data.observed.m(), n = data.observed.n();
    const DenseMatrix score_truth = data.truth ? *data.truth : data.observed.to_dense();
    const auto pool_mask = sampling::mask_from_indices(m * n, split.pool);

    for (Index k : budgets) {
      for (const auto& method : cfg.methods) {
        try {
          graphs::ProductOperator op(g.first, g.second, method.alpha, method.beta);
          for (Index l : split.initial) op.add_sample(l);
          const auto run = run_sampler(method, op, k, pool_mask, seed);

          std::vector<Index> omega = split.initial;
          omega.insert(omega.end(), run.samples.linear().begin(), run.samples.linear().end());
          completion::CompletionProblem p{restrict_ratings(data.observed, omega), omega, g.first, g.second,
                                          cfg.completion.alpha, cfg.completion.beta};
          completion::SolveOptions so;
          so.cg.tol = cfg.completion.tol;
          so.eig.seed = seed;
          const auto rep = completion::dglr_solve(p, so);

          std::vector<Index> hidden = split.eval;
          for (Index l : split.pool)
            if (!run.samples.contains(l)) hidden.push_back(l);
          std::sort(hidden.begin(), hidden.end());
          const double rmse = completion::rmse_eval(rep.x_star, score_truth, hidden);

          res.rows.push_back({method.label, seed, k, rmse, rep.lambda_min_est, run.wall_time_seconds,
                              std::accumulate(run.iter_counts.begin(), run.iter_counts.end(), std::size_t(0))});
          if (write) {
            sampling::SampleMeta meta{method.method, k,         seed, method.alpha, method.beta, method.q,
                                      method.zeta,   run.iter_counts, run.wall_time_seconds, m, n};
            const auto name = method.label + "_seed" + std::to_string(seed) + "_K" + std::to_string(k) + ".csv";
            sampling::save_sample_set((std::filesystem::path(cfg.output_dir) / "samples" / name).string(),
                                      run.samples, meta);
          }
        } catch (const std::exception& e) {
          res.failures.push_back({method.label, seed, k, e.what()});
        }
      }
    }
  }
  const auto by_key = [](const auto& a, const auto& b) {
    return std::tie(a.method, a.seed, a.k) < std::tie(b.method, b.seed, b.k);
  };
  std::stable_sort(res.rows.begin(), res.rows.end(), by_key);
  std::stable_sort(res.failures.begin(), res.failures.end(), by_key);
  if (write) {
    const std::filesystem::path dir(cfg.output_dir);
    if (!res.rows.empty()) export_metrics(res.rows, (dir / "metrics.csv").string());
    std::ofstream fail((dir / "failures.csv").string());
    if (!fail) throw Error("cannot write " + (dir / "failures.csv").string());
    write_failures(fail, res.failures);
  }
  return res;
}

}  // namespace amc::experiments
