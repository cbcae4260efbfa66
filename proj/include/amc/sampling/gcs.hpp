#pragma once

#include <optional>

#include "amc/graphs/product.hpp"
#include "amc/linalg/lobpcg.hpp"
#include "amc/sampling/sample_set.hpp"

namespace amc::sampling {

using graphs::ProductOperator;
using linalg::SolverOptions;

struct GcsOptions {
  SolverOptions eig = linalg::lobpcg_defaults();
  bool warm_start = true;
  // |phi| values within tie_tol of the maximum count as tied; lowest index wins.
  double tie_tol = 1e-8;
};

struct GcsState {
  ProductOperator op;               // sample_diag includes every pick
  Vector warm_vec;                  // last first eigenvector
  std::vector<std::size_t> iter_counts;
  std::vector<double> lambda_trace;  // lambda_min before each pick
};

struct GcsResult {
  SampleSet samples;
  GcsState state;
};

namespace detail {

// True when the unshifted operator's nullspace is exactly the constants, so
// the first eigenvector is known without solving.
inline bool constant_first_eigvec(const ProductOperator& op) {
  if (op.sample_count() != 0) return false;
  if (op.m() > 1 && !(op.alpha() > 0.0)) return false;
  if (op.n() > 1 && !(op.beta() > 0.0)) return false;
  return graphs::product_component_count(op) == 1;
}

struct EigStep {
  double lambda = 0.0;
  std::size_t iterations = 0;
};

// First eigenvector of successive operators; the result is left in warm.
// Cold starts draw from one RNG stream seeded by eig.seed.
struct FirstEigvec {
  explicit FirstEigvec(const GcsOptions& o) : opts(o), rng(o.eig.seed) {}

  EigStep next(const ProductOperator& op, Index step, const char* who) {
    const Index size = op.dim();
    if (constant_first_eigvec(op)) {
      warm = Vector::Constant(Eigen::Index(size), 1.0 / std::sqrt(double(size)));
      return {};
    }
    const bool use_warm = opts.warm_start && warm.size() == Eigen::Index(size);
    const Vector x0 = use_warm ? warm : linalg::random_unit_vector(size, rng);
    auto res = linalg::lobpcg_smallest(op, x0, opts.eig);
    if (!res.converged)
      throw ConvergenceError(std::string(who) + ": eigensolver failed at step " + std::to_string(step),
                             res.residual, res.iterations);
    warm = std::move(res.pair.vec);
    return {res.pair.value, res.iterations};
  }

  GcsOptions opts;
  std::mt19937_64 rng;
  Vector warm;
};

}  // namespace detail

/// Greedy Gershgorin-disc-shift sampling on the product graph.
///
/// Each step computes the first eigenvector phi of the current operator,
/// picks the allowed, unsampled entry with the largest |phi| and adds a unit
/// self-loop there. Entries already marked in op.sample_diag (e.g. initially
/// observed data) are never picked again. With warm_start the previous phi
/// seeds the next LOBPCG run; otherwise each step starts from a fresh random
/// vector drawn from eig.seed.
inline GcsResult gcs_sample(ProductOperator op, Index k, const IndexMask* allowed = nullptr,
                            const GcsOptions& opts = {}, std::optional<Vector> warm = std::nullopt) {
  const Index size = op.dim();
  std::vector<char> taken(size, 0);
  for (Index l = 0; l < size; ++l) taken[l] = op.sampled(l) ? 1 : 0;
  detail::check_pool(allowed, size, taken, k, "gcs_sample");

  GcsResult out{SampleSet(op.m(), op.n(), k), GcsState{op, {}, {}, {}}};
  GcsState& st = out.state;
  detail::FirstEigvec eig(opts);
  if (warm) {
    if (static_cast<Index>(warm->size()) != size) throw DimensionError("gcs_sample: warm vector length");
    eig.warm = *warm;
  }
  auto candidate = [&](Index l) { return !st.op.sampled(l) && (!allowed || (*allowed)[l]); };

  for (Index t = 0; t < k; ++t) {
    const auto step = eig.next(st.op, t, "gcs_sample");
    const Index pick = detail::argmax_abs(eig.warm, opts.tie_tol, candidate);
    out.samples.add_linear(pick);
    st.op.add_sample(pick);
    st.iter_counts.push_back(step.iterations);
    st.lambda_trace.push_back(step.lambda);
  }
  st.warm_vec = eig.warm;
  return out;
}

inline GcsResult gcs_sample(const ProductOperator& op, Index k, const IndexMask& allowed,
                            const GcsOptions& opts = {}) {
  return gcs_sample(op, k, &allowed, opts);
}

/// Upper bound on lambda_max(Q) from the Gershgorin discs of Q:
/// 2 alpha d_r + 2 beta d_c + 1 with d the maximum factor-graph degrees.
inline double lambda_max_bound(const graphs::GraphLaplacian& row_graph, const graphs::GraphLaplacian& col_graph,
                               double alpha, double beta) {
  return 2.0 * alpha * row_graph.max_degree() + 2.0 * beta * col_graph.max_degree() + 1.0;
}

}  // namespace amc::sampling
