#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "amc/linalg/sparse.hpp"

namespace amc::graphs {

using linalg::DenseMatrix;
using linalg::Index;
using linalg::SparseSym;
using linalg::Triplet;
using linalg::Vector;

/// Weighted undirected graph together with its combinatorial Laplacian
/// L = D - W.
class GraphLaplacian {
 public:
  GraphLaplacian() = default;

  Index n() const { return weights_.dim(); }
  const SparseSym& weights() const { return weights_; }
  const SparseSym& laplacian() const { return laplacian_; }
  const Vector& degrees() const { return degrees_; }
  double max_degree() const { return max_degree_; }

  friend GraphLaplacian laplacian_from_weights(const SparseSym& w);

 private:
  SparseSym weights_;
  SparseSym laplacian_;
  Vector degrees_;
  double max_degree_ = 0.0;
};

/// Builds the Laplacian of a nonnegative, zero-diagonal symmetric weight matrix.
/// Zero weights are dropped from the adjacency.
inline GraphLaplacian laplacian_from_weights(const SparseSym& w) {
  const Index n = w.dim();
  std::vector<Triplet> adj;
  std::vector<Triplet> lap;
  Vector deg = Vector::Zero(static_cast<Eigen::Index>(n));
  for (const auto& t : w.triplets()) {
    if (t.value < 0.0)
      throw InvalidArgument("laplacian_from_weights: negative weight at (" + std::to_string(t.row) +
                            "," + std::to_string(t.col) + ")");
    if (t.row == t.col) {
      if (t.value != 0.0)
        throw InvalidArgument("laplacian_from_weights: nonzero diagonal at node " +
                              std::to_string(t.row));
      continue;
    }
    if (t.value == 0.0) continue;
    adj.push_back(t);
    lap.push_back({t.row, t.col, -t.value});
    deg(Eigen::Index(t.row)) += t.value;
  }
  GraphLaplacian g;
  g.weights_ = SparseSym::from_triplets(n, adj);
  // Diagonal stored even for isolated nodes so every row has an entry.
  for (Index i = 0; i < n; ++i) lap.push_back({i, i, deg(Eigen::Index(i))});
  g.laplacian_ = SparseSym::from_triplets(n, std::move(lap));
  g.degrees_ = deg;
  g.max_degree_ = n ? deg.maxCoeff() : 0.0;
  return g;
}

inline GraphLaplacian laplacian_from_upper_weights(Index n, const std::vector<Triplet>& upper) {
  return laplacian_from_weights(SparseSym::from_upper(n, upper));
}

/// x^T L x, the total variation sum_{k<l} W(k,l) (x(k) - x(l))^2.
inline double graph_variation(const GraphLaplacian& g, const Vector& x) {
  if (static_cast<Index>(x.size()) != g.n())
    throw DimensionError("graph_variation: signal length does not match node count");
  return x.dot(linalg::spmv(g.laplacian(), x));
}

/// Component label per node (labels 0..k-1 in order of lowest member).
inline std::vector<Index> connected_components(const SparseSym& w, Index* count = nullptr) {
  const Index n = w.dim();
  std::vector<Index> label(n, static_cast<Index>(-1));
  Index next = 0;
  std::vector<Index> stack;
  for (Index s = 0; s < n; ++s) {
    if (label[s] != static_cast<Index>(-1)) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (Index k = w.row_offsets()[u]; k < w.row_offsets()[u + 1]; ++k) {
        const Index v = w.col_indices()[k];
        if (w.values()[k] != 0.0 && label[v] == static_cast<Index>(-1)) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

inline Index component_count(const GraphLaplacian& g) {
  Index c = 0;
  connected_components(g.weights(), &c);
  return c;
}

inline bool is_connected(const GraphLaplacian& g) { return component_count(g) <= 1; }

/// Graph with a single node and no edges (the column graph of a vector signal).
inline GraphLaplacian single_node_graph() { return laplacian_from_weights(SparseSym::from_triplets(1, {})); }

/// Unweighted path 0 - 1 - ... - (n-1).
inline GraphLaplacian path_graph(Index n, double weight = 1.0) {
  std::vector<Triplet> upper;
  for (Index i = 0; i + 1 < n; ++i) upper.push_back({i, i + 1, weight});
  return laplacian_from_upper_weights(n, upper);
}

}  // namespace amc::graphs
