#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "amc/graphs/product.hpp"
#include "amc/graphs/rating.hpp"
#include "amc/linalg/cg.hpp"
#include "amc/linalg/lobpcg.hpp"

namespace amc::completion {

using graphs::GraphLaplacian;
using graphs::ProductOperator;
using graphs::RatingMatrix;
using linalg::DenseMatrix;
using linalg::Index;
using linalg::SolverOptions;
using linalg::Vector;

/// Observed matrix Y on the sample set Omega plus the dual-graph regularizer.
struct CompletionProblem {
  RatingMatrix y;            // holds (at least) every entry of omega
  std::vector<Index> omega;  // linear indices, column-major
  GraphLaplacian row_graph;
  GraphLaplacian col_graph;
  double alpha = 0.1;
  double beta = 0.1;

  Index m() const { return y.m(); }
  Index n() const { return y.n(); }

  void validate() const {
    if (row_graph.n() != m() || col_graph.n() != n())
      throw DimensionError("CompletionProblem: graph sizes " + std::to_string(row_graph.n()) + "x" +
                           std::to_string(col_graph.n()) + " do not match Y " + std::to_string(m()) + "x" +
                           std::to_string(n()));
    if (!(alpha >= 0.0) || !(beta >= 0.0)) throw InvalidArgument("CompletionProblem: alpha, beta must be >= 0");
    for (Index l : omega) {
      const auto [i, j] = graphs::mat_index(l, m(), n());
      if (!y.known(i, j))
        throw InvalidArgument("CompletionProblem: sampled entry (" + std::to_string(i) + "," + std::to_string(j) +
                              ") has no observed value");
    }
  }

  // A_Omega as a 0/1 m x n mask.
  DenseMatrix mask() const {
    DenseMatrix a = DenseMatrix::Zero(Eigen::Index(m()), Eigen::Index(n()));
    for (Index l : omega) a(Eigen::Index(l % m()), Eigen::Index(l / m())) = 1.0;
    return a;
  }

  // Y zero-filled off Omega.
  DenseMatrix y_omega() const {
    DenseMatrix out = DenseMatrix::Zero(Eigen::Index(m()), Eigen::Index(n()));
    for (Index l : omega) {
      const Index i = l % m(), j = l / m();
      out(Eigen::Index(i), Eigen::Index(j)) = y.value(i, j);
    }
    return out;
  }

  ProductOperator product() const {
    ProductOperator op(row_graph, col_graph, alpha, beta);
    for (Index l : omega) op.add_sample(l);
    return op;
  }
};

/// Problem whose sample set is every known entry of y.
inline CompletionProblem make_problem(RatingMatrix y, GraphLaplacian row_graph, GraphLaplacian col_graph,
                                      double alpha, double beta) {
  CompletionProblem p{std::move(y), {}, std::move(row_graph), std::move(col_graph), alpha, beta};
  p.omega = p.y.known_indices();
  p.validate();
  return p;
}

struct CompletionReport {
  DenseMatrix x_star;
  double residual = 0.0;  // CG relative residual
  std::size_t cg_iterations = 0;
  double lambda_min_est = std::numeric_limits<double>::quiet_NaN();
  std::size_t lobpcg_iterations = 0;
  // Filled when ground truth is supplied.
  double rho = std::numeric_limits<double>::quiet_NaN();
  double bound = std::numeric_limits<double>::quiet_NaN();
  double actual_error = std::numeric_limits<double>::quiet_NaN();
  double rmse = std::numeric_limits<double>::quiet_NaN();
};

struct SolveOptions {
  SolverOptions cg = linalg::cg_defaults();
  bool estimate_lambda_min = true;
  SolverOptions eig = linalg::lobpcg_defaults();
};

namespace detail {

// Product-graph components without a sample, seen through the effective
// factor graphs (a factor with zero weight contributes no edges).
inline std::vector<std::pair<Index, Index>> singular_components(const CompletionProblem& p) {
  const auto eff = [](const GraphLaplacian& g, double w) {
    return w > 0.0 ? g : graphs::laplacian_from_weights(linalg::SparseSym::from_triplets(g.n(), {}));
  };
  ProductOperator op(eff(p.row_graph, p.alpha), eff(p.col_graph, p.beta), p.alpha, p.beta);
  for (Index l : p.omega) op.add_sample(l);
  return graphs::unsampled_components(op);
}

}  // namespace detail

/// Minimizer of the dual-graph-regularized objective: solves
/// (A~_Omega + alpha I_n (x) L_r + beta L_c (x) I_m) vec(X) = vec(Y_Omega) by CG
/// on the implicit operator. Throws SingularSystemError when some connected
/// component of the product graph holds no sample.
inline CompletionReport dglr_solve(const CompletionProblem& p, const SolveOptions& opts = {}) {
  p.validate();
  const auto bad = detail::singular_components(p);
  if (!bad.empty())
    throw SingularSystemError("dglr_solve: " + std::to_string(bad.size()) +
                              " product-graph component(s) hold no sample (first: row component " +
                              std::to_string(bad[0].first) + ", column component " +
                              std::to_string(bad[0].second) + "); the system is singular");
  const ProductOperator op = p.product();
  const Vector b = p.y_omega().reshaped();
  CompletionReport rep;
  const auto res = linalg::cg_solve(op, b, opts.cg);
  rep.x_star = res.x.reshaped(Eigen::Index(p.m()), Eigen::Index(p.n()));
  rep.residual = res.residual;
  rep.cg_iterations = res.iterations;
  if (opts.estimate_lambda_min) {
    const auto eig = linalg::lobpcg_smallest(op, linalg::random_unit_vector(op.dim(), opts.eig.seed), opts.eig);
    rep.lambda_min_est = eig.pair.value;
    rep.lobpcg_iterations = eig.iterations;
  }
  return rep;
}

/// f(X) = 1/2 ||A_Omega o (X - Y)||_F^2 + alpha/2 Tr(X^T L_r X) + beta/2 Tr(X L_c X^T).
inline double dglr_objective(const DenseMatrix& x, const CompletionProblem& p) {
  if (x.rows() != Eigen::Index(p.m()) || x.cols() != Eigen::Index(p.n()))
    throw DimensionError("dglr_objective: X shape does not match the problem");
  const DenseMatrix fit = p.mask().cwiseProduct(x - p.y_omega());
  double smooth_r = 0.0, smooth_c = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) smooth_r += graphs::graph_variation(p.row_graph, x.col(j));
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    smooth_c += graphs::graph_variation(p.col_graph, x.row(i).transpose());
  return 0.5 * fit.squaredNorm() + 0.5 * p.alpha * smooth_r + 0.5 * p.beta * smooth_c;
}

/// df/dX = A_Omega o (X - Y) + alpha L_r X + beta X L_c.
inline DenseMatrix dglr_gradient(const DenseMatrix& x, const CompletionProblem& p) {
  if (x.rows() != Eigen::Index(p.m()) || x.cols() != Eigen::Index(p.n()))
    throw DimensionError("dglr_gradient: X shape does not match the problem");
  DenseMatrix g = p.mask().cwiseProduct(x - p.y_omega());
  const auto& lr = p.row_graph.laplacian();
  const auto& lc = p.col_graph.laplacian();
  for (Eigen::Index j = 0; j < x.cols(); ++j) g.col(j) += p.alpha * linalg::spmv(lr, x.col(j));
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    g.row(i) += p.beta * linalg::spmv(lc, x.row(i).transpose()).transpose();
  return g;
}

struct ErrorBound {
  double rho = 0.0;           // ||(alpha I (x) L_r + beta L_c (x) I) vec(X + N)||
  double bound = 0.0;         // rho / lambda_min + ||N||
  double actual_error = 0.0;  // ||X* - X||_F
};

/// Error bound for a solve whose observations are Y = X + N on Omega.
inline ErrorBound mse_upper_bound(const DenseMatrix& x_star, const DenseMatrix& truth, const DenseMatrix& noise,
                                  const CompletionProblem& p, double lambda_min_q) {
  if (!(lambda_min_q > 0.0)) throw InvalidArgument("mse_upper_bound: lambda_min must be positive");
  const auto shape_ok = [&](const DenseMatrix& a) {
    return a.rows() == Eigen::Index(p.m()) && a.cols() == Eigen::Index(p.n());
  };
  if (!shape_ok(x_star) || !shape_ok(truth) || !shape_ok(noise))
    throw DimensionError("mse_upper_bound: matrix shapes do not match the problem");
  const ProductOperator op(p.row_graph, p.col_graph, p.alpha, p.beta);
  Vector lx;
  op.apply_smoothness((truth + noise).reshaped(), lx);
  ErrorBound out;
  out.rho = lx.norm();
  out.bound = out.rho / lambda_min_q + noise.norm();
  out.actual_error = (x_star - truth).norm();
  return out;
}

/// Root mean square error over the listed linear indices.
inline double rmse_eval(const DenseMatrix& x_star, const DenseMatrix& truth, const std::vector<Index>& eval_set) {
  if (eval_set.empty()) throw InvalidArgument("rmse_eval: empty evaluation set");
  if (x_star.rows() != truth.rows() || x_star.cols() != truth.cols())
    throw DimensionError("rmse_eval: shape mismatch");
  double ss = 0.0;
  for (Index l : eval_set) {
    if (l >= Index(truth.size())) throw DimensionError("rmse_eval: index out of range");
    const double d = x_star(Eigen::Index(l)) - truth(Eigen::Index(l));
    ss += d * d;
  }
  return std::sqrt(ss / double(eval_set.size()));
}

/// RMSE against the known entries of a (partially observed) truth matrix.
inline double rmse_eval(const DenseMatrix& x_star, const RatingMatrix& truth) {
  if (truth.size() == 0) throw InvalidArgument("rmse_eval: empty evaluation set");
  if (x_star.rows() != Eigen::Index(truth.m()) || x_star.cols() != Eigen::Index(truth.n()))
    throw DimensionError("rmse_eval: shape mismatch");
  double ss = 0.0;
  for (const auto& e : truth.entries()) {
    const double d = x_star(Eigen::Index(e.row), Eigen::Index(e.col)) - e.value;
    ss += d * d;
  }
  return std::sqrt(ss / double(truth.size()));
}

}  // namespace amc::completion
