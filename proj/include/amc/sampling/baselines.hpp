#pragma once

#include <random>

#include "amc/linalg/dense.hpp"
#include "amc/sampling/gcs.hpp"

namespace amc::sampling {

/// K distinct indices drawn uniformly from the pool (partial Fisher-Yates),
/// returned in draw order.
inline SampleSet random_sample(Index m, Index n, const IndexMask& pool, Index k, std::uint64_t seed) {
  if (pool.size() != m * n)
    throw DimensionError("random_sample: pool mask has length " + std::to_string(pool.size()) +
                         ", expected " + std::to_string(m * n));
  std::vector<Index> cand;
  for (Index l = 0; l < pool.size(); ++l)
    if (pool[l]) cand.push_back(l);
  if (k > cand.size())
    throw InvalidArgument("random_sample: budget " + std::to_string(k) + " exceeds pool of " +
                          std::to_string(cand.size()));
  std::mt19937_64 rng(seed);
  SampleSet out(m, n, k);
  for (Index t = 0; t < k; ++t) {
    std::uniform_int_distribution<Index> pick(t, cand.size() - 1);
    std::swap(cand[t], cand[pick(rng)]);
    out.add_linear(cand[t]);
  }
  return out;
}

struct GreedyTrace {
  SampleSet samples;
  std::vector<double> lambda_trace;  // lambda_min after each pick
};

inline constexpr Index kExactGreedyCap = 64;

/// Brute-force greedy E-optimal selection: every step tries each candidate
/// e_l e_l^T and keeps the one maximizing the dense lambda_min (lowest index
/// on ties). Small instances only.
inline GreedyTrace exact_greedy_oracle(ProductOperator op, Index k, const IndexMask* allowed = nullptr,
                                       Index cap = kExactGreedyCap) {
  const Index size = op.dim();
  if (size > cap)
    throw InvalidArgument("exact_greedy_oracle: m*n = " + std::to_string(size) + " exceeds cap " +
                          std::to_string(cap));
  std::vector<char> taken(size, 0);
  for (Index l = 0; l < size; ++l) taken[l] = op.sampled(l) ? 1 : 0;
  detail::check_pool(allowed, size, taken, k, "exact_greedy_oracle");

  GreedyTrace out{SampleSet(op.m(), op.n(), k), {}};
  DenseMatrix q = op.materialize();
  for (Index t = 0; t < k; ++t) {
    Index best = size;
    double best_val = 0.0;
    for (Index l = 0; l < size; ++l) {
      if (taken[l] || (allowed && !(*allowed)[l])) continue;
      q(Eigen::Index(l), Eigen::Index(l)) += 1.0;
      const double v = linalg::dense_lambda_min(q);
      q(Eigen::Index(l), Eigen::Index(l)) -= 1.0;
      if (best == size || v > best_val) {
        best = l;
        best_val = v;
      }
    }
    q(Eigen::Index(best), Eigen::Index(best)) += 1.0;
    taken[best] = 1;
    out.samples.add_linear(best);
    out.lambda_trace.push_back(best_val);
  }
  return out;
}

}  // namespace amc::sampling
