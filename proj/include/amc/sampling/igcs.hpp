#pragma once

#include "amc/sampling/gcs.hpp"
#include "amc/sampling/split.hpp"

namespace amc::sampling {

struct IgcsOptions {
  double q = 0.5;
  Index zeta = 1;  // picks per cluster/group before switching
  SolverOptions eig = linalg::lobpcg_defaults();
  double tie_tol = 1e-8;
};

struct IgcsStep {
  bool cluster = true;  // false: group
  Index block = 0;      // column j for a cluster, row i for a group
  Index row = 0;
  Index col = 0;
  bool random_start = false;
  std::size_t iterations = 0;
};

struct IgcsResult {
  SampleSet samples;
  std::vector<IgcsStep> trace;
  std::vector<std::size_t> iter_counts;
};

/// Block-wise GCS alternating between clusters (columns, matrix
/// q A~_j + alpha L_r) and groups (rows, matrix (1 - q) A^_i + beta L_c).
///
/// Starts at cluster 0. After zeta picks in a block it moves to the group
/// (or cluster) indexed by the last pick. The first pick in a block starts
/// LOBPCG from a fresh random vector, later picks reuse the block's previous
/// eigenvector. A block with no allowed, unsampled entry left is skipped in
/// favor of the next block index (wrapping). Entries already marked in
/// op.sample_diag count as sampled.
inline IgcsResult igcs_sample(const graphs::ProductOperator& op, Index k, const IndexMask* allowed = nullptr,
                              const IgcsOptions& opts = {}) {
  if (!(opts.q > 0.0 && opts.q < 1.0)) throw InvalidArgument("igcs_sample: q must lie in (0, 1)");
  if (opts.zeta < 1) throw InvalidArgument("igcs_sample: zeta must be >= 1");
  const Index m = op.m(), n = op.n(), size = op.dim();
  std::vector<char> taken(size, 0);
  for (Index l = 0; l < size; ++l) taken[l] = op.sampled(l) ? 1 : 0;
  detail::check_pool(allowed, size, taken, k, "igcs_sample");

  auto ok = [&](Index l) { return !taken[l] && (!allowed || (*allowed)[l]); };
  auto block_open = [&](bool cluster, Index b) {
    for (Index t = 0; t < (cluster ? m : n); ++t)
      if (ok(cluster ? t + m * b : b + m * t)) return true;
    return false;
  };
  const auto& lr = op.row_graph().laplacian();
  const auto& lc = op.col_graph().laplacian();
  const bool row_const = graphs::is_connected(op.row_graph()) && (m == 1 || op.alpha() > 0.0);
  const bool col_const = graphs::is_connected(op.col_graph()) && (n == 1 || op.beta() > 0.0);

  std::mt19937_64 rng(opts.eig.seed);
  IgcsResult out{SampleSet(m, n, k), {}, {}};
  bool cluster = true;
  Index block = 0, w = 0;
  Vector phi;
  while (out.samples.size() < k) {
    if (!block_open(cluster, block)) {
      const Index nb = cluster ? n : m;
      do block = (block + 1) % nb;
      while (!block_open(cluster, block));
      w = 0;
    }
    ++w;
    const Index len = cluster ? m : n;
    Vector shift(static_cast<Eigen::Index>(len));
    for (Index t = 0; t < len; ++t)
      shift(Eigen::Index(t)) = taken[cluster ? t + m * block : block + m * t] ? 1.0 : 0.0;
    IgcsStep step{cluster, block, 0, 0, w == 1, 0};
    if (shift.isZero() && (cluster ? row_const : col_const)) {
      phi = Vector::Constant(Eigen::Index(len), 1.0 / std::sqrt(double(len)));
      step.random_start = false;
    } else {
      const ShiftedLaplacian a(cluster ? lr : lc, cluster ? op.alpha() : op.beta(),
                               (cluster ? opts.q : 1.0 - opts.q) * shift);
      const Vector x0 = w == 1 || phi.size() != Eigen::Index(len) ? linalg::random_unit_vector(len, rng) : phi;
      auto res = linalg::lobpcg_smallest(a, x0, opts.eig);
      if (!res.converged)
        throw ConvergenceError("igcs_sample: eigensolver failed at step " + std::to_string(out.samples.size()),
                               res.residual, res.iterations);
      phi = std::move(res.pair.vec);
      step.iterations = res.iterations;
    }
    const Index pick = detail::argmax_abs(phi, opts.tie_tol, [&](Index t) {
      return ok(cluster ? t + m * block : block + m * t);
    });
    step.row = cluster ? pick : block;
    step.col = cluster ? block : pick;
    out.samples.add(step.row, step.col);
    taken[step.row + m * step.col] = 1;
    out.trace.push_back(step);
    out.iter_counts.push_back(step.iterations);
    if (w >= opts.zeta) {
      cluster = !cluster;
      block = pick;
      w = 0;
    }
  }
  return out;
}

inline IgcsResult igcs_sample(const graphs::GraphLaplacian& row_graph, const graphs::GraphLaplacian& col_graph,
                              double alpha, double beta, Index k, const IndexMask* allowed = nullptr,
                              const IgcsOptions& opts = {}) {
  return igcs_sample(graphs::ProductOperator(row_graph, col_graph, alpha, beta), k, allowed, opts);
}

}  // namespace amc::sampling
