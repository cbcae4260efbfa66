#pragma once

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "amc/graphs/laplacian.hpp"
#include "amc/graphs/rating.hpp"

namespace amc::graphs {

/// Feature-similarity graph (G1).
///
/// Node i links to every node whose Euclidean distance is at most its k-th
/// smallest distance (ties at the k-th distance are all kept). Weights are
/// exp(-d^2 / sigma^2) with sigma the mean distance over those links, and the
/// two directions are merged with max(w_ij, w_ji). features: one row per node.
inline GraphLaplacian knn_feature_graph(const DenseMatrix& features, Index k = 10) {
  const Index n = static_cast<Index>(features.rows());
  if (k == 0) throw InvalidArgument("knn_feature_graph: k must be positive");
  if (k >= n)
    throw InvalidArgument("knn_feature_graph: k = " + std::to_string(k) + " needs at least " +
                          std::to_string(k + 1) + " nodes, got " + std::to_string(n));
  if (!features.allFinite()) throw InvalidArgument("knn_feature_graph: non-finite feature");

  DenseMatrix dist(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      dist(Eigen::Index(i), Eigen::Index(j)) =
          (features.row(Eigen::Index(i)) - features.row(Eigen::Index(j))).norm();

  std::vector<std::vector<Index>> nbrs(n);
  double dsum = 0.0;
  std::size_t dcount = 0;
  std::vector<double> row;
  for (Index i = 0; i < n; ++i) {
    row.clear();
    for (Index j = 0; j < n; ++j)
      if (j != i) row.push_back(dist(Eigen::Index(i), Eigen::Index(j)));
    std::nth_element(row.begin(), row.begin() + std::ptrdiff_t(k - 1), row.end());
    const double kth = row[k - 1];
    for (Index j = 0; j < n; ++j)
      if (j != i && dist(Eigen::Index(i), Eigen::Index(j)) <= kth) {
        nbrs[i].push_back(j);
        dsum += dist(Eigen::Index(i), Eigen::Index(j));
        ++dcount;
      }
  }
  const double sigma = dsum / static_cast<double>(dcount);

  std::map<std::pair<Index, Index>, double> w;
  for (Index i = 0; i < n; ++i)
    for (Index j : nbrs[i]) {
      const double d = dist(Eigen::Index(i), Eigen::Index(j));
      const double wij = sigma > 0.0 ? std::exp(-(d * d) / (sigma * sigma)) : 1.0;
      auto key = std::minmax(i, j);
      auto [it, inserted] = w.emplace(key, wij);
      if (!inserted) it->second = std::max(it->second, wij);
    }
  std::vector<Triplet> upper;
  upper.reserve(w.size());
  for (const auto& [key, value] : w) upper.push_back({key.first, key.second, value});
  return laplacian_from_upper_weights(n, upper);
}

enum class Axis { rows, cols };

struct ContentGraphOptions {
  std::optional<double> d_s = std::nullopt;  // sparsification threshold; default 60th percentile
  std::optional<double> gamma = std::nullopt;  // kernel width; default mean (d - d_min)^2 over kept pairs
  bool warn = true;             // log a warning to std::clog when disconnected
};

struct ContentGraph {
  GraphLaplacian graph;
  double d_min = 0.0;
  double d_s = 0.0;
  double gamma = 0.0;
  Index components = 0;
  DenseMatrix distances;  // +inf where the two nodes share no rated entry
};

namespace detail {

// Linear-interpolated percentile of sorted data, p in [0, 100].
inline double percentile_sorted(const std::vector<double>& v, double p) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = p / 100.0 * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace detail

/// Content-based graph (G2) over the rows or columns of a partially observed
/// matrix.
///
/// d_ij = ||z_i(R_ij) - z_j(R_ij)|| / sqrt(|R_ij|) over the co-rated entries
/// R_ij (infinite when empty); w_ij = exp(-(d_ij - d_min)^2 / gamma) when
/// d_ij <= d_s, else 0.
inline ContentGraph content_graph(const RatingMatrix& z, Axis axis, ContentGraphOptions opts = {}) {
  const bool by_rows = axis == Axis::rows;
  const Index nodes = by_rows ? z.m() : z.n();
  if (nodes < 2) throw InvalidArgument("content_graph: need at least two nodes along the axis");
  if (opts.gamma && !(*opts.gamma > 0.0)) throw InvalidArgument("content_graph: gamma must be positive");

  // Per node: sorted (other-axis index, value) list.
  std::vector<std::vector<std::pair<Index, double>>> lists(nodes);
  for (const auto& e : z.entries()) {
    if (by_rows)
      lists[e.row].emplace_back(e.col, e.value);
    else
      lists[e.col].emplace_back(e.row, e.value);
  }
  for (auto& l : lists) std::sort(l.begin(), l.end());

  const double inf = std::numeric_limits<double>::infinity();
  ContentGraph out;
  out.distances = DenseMatrix::Constant(Eigen::Index(nodes), Eigen::Index(nodes), inf);
  std::vector<double> finite;
  for (Index i = 0; i < nodes; ++i) {
    out.distances(Eigen::Index(i), Eigen::Index(i)) = 0.0;
    for (Index j = i + 1; j < nodes; ++j) {
      const auto& a = lists[i];
      const auto& b = lists[j];
      std::size_t p = 0, q = 0, overlap = 0;
      double ss = 0.0;
      while (p < a.size() && q < b.size()) {
        if (a[p].first < b[q].first)
          ++p;
        else if (b[q].first < a[p].first)
          ++q;
        else {
          const double diff = a[p].second - b[q].second;
          ss += diff * diff;
          ++overlap;
          ++p;
          ++q;
        }
      }
      if (overlap == 0) continue;
      const double d = std::sqrt(ss) / std::sqrt(static_cast<double>(overlap));
      out.distances(Eigen::Index(i), Eigen::Index(j)) = d;
      out.distances(Eigen::Index(j), Eigen::Index(i)) = d;
      finite.push_back(d);
    }
  }
  if (finite.empty()) throw InvalidArgument("content_graph: no pair of nodes shares a rated entry");

  std::sort(finite.begin(), finite.end());
  out.d_min = finite.front();
  out.d_s = opts.d_s ? *opts.d_s : detail::percentile_sorted(finite, 60.0);

  std::vector<Triplet> kept;
  double sq_sum = 0.0;
  for (Index i = 0; i < nodes; ++i)
    for (Index j = i + 1; j < nodes; ++j) {
      const double d = out.distances(Eigen::Index(i), Eigen::Index(j));
      if (d <= out.d_s) {
        kept.push_back({i, j, d});
        sq_sum += (d - out.d_min) * (d - out.d_min);
      }
    }
  out.gamma = opts.gamma ? *opts.gamma : (kept.empty() ? 1.0 : sq_sum / double(kept.size()));
  // All kept pairs at d_min gives gamma = 0; every weight is then exp(0).
  const bool degenerate = !(out.gamma > 0.0);

  std::vector<Triplet> upper;
  upper.reserve(kept.size());
  for (const auto& t : kept) {
    const double x = t.value - out.d_min;
    upper.push_back({t.row, t.col, degenerate ? 1.0 : std::exp(-(x * x) / out.gamma)});
  }
  out.graph = laplacian_from_upper_weights(nodes, upper);
  out.components = component_count(out.graph);
  if (out.components > 1 && opts.warn)
    std::clog << "warning: content graph over " << (by_rows ? "rows" : "cols") << " has "
              << out.components << " connected components\n";
  return out;
}

struct CommunityGraph {
  GraphLaplacian graph;
  std::vector<Index> labels;  // community per node
};

/// Planted-partition graph with unit weights. Communities are contiguous
/// blocks of near-equal size. Resampled (same RNG stream) until connected.
inline CommunityGraph community_graph(Index n_nodes, Index n_communities, double p_in, double p_out,
                                      std::uint64_t seed, int max_retries = 100) {
  if (n_communities == 0 || n_communities > n_nodes)
    throw InvalidArgument("community_graph: need 1 <= communities <= nodes");
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0))
    throw InvalidArgument("community_graph: need 0 <= p_out < p_in <= 1");
  CommunityGraph out;
  out.labels.resize(n_nodes);
  for (Index i = 0; i < n_nodes; ++i) out.labels[i] = i * n_communities / n_nodes;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::vector<Triplet> upper;
    for (Index i = 0; i < n_nodes; ++i)
      for (Index j = i + 1; j < n_nodes; ++j) {
        const double p = out.labels[i] == out.labels[j] ? p_in : p_out;
        if (unif(rng) < p) upper.push_back({i, j, 1.0});
      }
    out.graph = laplacian_from_upper_weights(n_nodes, upper);
    if (is_connected(out.graph)) return out;
  }
  throw Error("community_graph: not connected after " + std::to_string(max_retries) + " attempts");
}

}  // namespace amc::graphs
