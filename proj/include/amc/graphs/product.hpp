#pragma once

#include <string>
#include <vector>

#include "amc/graphs/index.hpp"
#include "amc/graphs/laplacian.hpp"

namespace amc::graphs {

/// Implicit operator Q = diag(s) + alpha I_n (x) L_r + beta L_c (x) I_m on
/// vec(X) for an m x n matrix X, where s is the 0/1 sample indicator.
///
/// Applied as s o x + alpha vec(L_r X) + beta vec(X L_c); the mn x mn matrix
/// is never formed.
class ProductOperator {
 public:
  ProductOperator(GraphLaplacian row_graph, GraphLaplacian col_graph, double alpha, double beta)
      : row_(std::move(row_graph)), col_(std::move(col_graph)), alpha_(alpha), beta_(beta) {
    if (!(alpha_ >= 0.0) || !(beta_ >= 0.0))
      throw InvalidArgument("ProductOperator: alpha and beta must be nonnegative");
    if (row_.n() == 0 || col_.n() == 0) throw InvalidArgument("ProductOperator: empty factor graph");
    sample_diag_ = Vector::Zero(Eigen::Index(m() * n()));
  }

  Index m() const { return row_.n(); }
  Index n() const { return col_.n(); }
  Index dim() const { return m() * n(); }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  const GraphLaplacian& row_graph() const { return row_; }
  const GraphLaplacian& col_graph() const { return col_; }
  const Vector& sample_diag() const { return sample_diag_; }

  bool sampled(Index l) const { return sample_diag_(Eigen::Index(l)) != 0.0; }

  /// Marks linear index l as sampled (the rank-one shift e_l e_l^T).
  void add_sample(Index l) {
    if (l >= dim()) throw DimensionError("ProductOperator::add_sample: index out of range");
    sample_diag_(Eigen::Index(l)) = 1.0;
  }

  void add_sample(Index i, Index j) { add_sample(lin_index(i, j, m(), n())); }

  void clear_samples() { sample_diag_.setZero(); }

  std::size_t sample_count() const {
    return static_cast<std::size_t>((sample_diag_.array() != 0.0).count());
  }

  /// y = Q x. Per entry: sample term, then row-graph sum, then column-graph
  /// sum, each in ascending neighbor order.
  void apply(const Vector& x, Vector& y) const { apply_impl(x, y, true); }

  /// y = (alpha I (x) L_r + beta L_c (x) I) x, the sample term left out.
  void apply_smoothness(const Vector& x, Vector& y) const { apply_impl(x, y, false); }

  Vector diagonal() const {
    const Vector dr = row_.laplacian().diagonal();
    const Vector dc = col_.laplacian().diagonal();
    Vector d(static_cast<Eigen::Index>(dim()));
    for (Index j = 0; j < n(); ++j)
      for (Index i = 0; i < m(); ++i) {
        const Index l = i + m() * j;
        d(Eigen::Index(l)) = sample_diag_(Eigen::Index(l)) + alpha_ * dr(Eigen::Index(i)) +
                             beta_ * dc(Eigen::Index(j));
      }
    return d;
  }

  /// Dense Q; intended for oracles on small instances.
  DenseMatrix materialize() const {
    const DenseMatrix lr = row_.laplacian().to_dense();
    const DenseMatrix lc = col_.laplacian().to_dense();
    const Index mm = m(), nn = n();
    DenseMatrix q = DenseMatrix::Zero(Eigen::Index(dim()), Eigen::Index(dim()));
    for (Index j = 0; j < nn; ++j)
      for (Index i = 0; i < mm; ++i) {
        const Index l = i + mm * j;
        q(Eigen::Index(l), Eigen::Index(l)) += sample_diag_(Eigen::Index(l));
        for (Index k = 0; k < mm; ++k)
          q(Eigen::Index(l), Eigen::Index(k + mm * j)) += alpha_ * lr(Eigen::Index(i), Eigen::Index(k));
        for (Index t = 0; t < nn; ++t)
          q(Eigen::Index(l), Eigen::Index(i + mm * t)) += beta_ * lc(Eigen::Index(j), Eigen::Index(t));
      }
    return q;
  }

 private:
  void apply_impl(const Vector& x, Vector& y, bool with_samples) const {
    const Index mm = m(), nn = n();
    if (static_cast<Index>(x.size()) != mm * nn)
      throw DimensionError("product_apply: vector length " + std::to_string(x.size()) +
                           " does not match m*n = " + std::to_string(mm * nn));
    y.resize(x.size());
    const auto& lr = row_.laplacian();
    const auto& lc = col_.laplacian();
    for (Index j = 0; j < nn; ++j)
      for (Index i = 0; i < mm; ++i) {
        const Index l = i + mm * j;
        double acc = with_samples ? sample_diag_(Eigen::Index(l)) * x(Eigen::Index(l)) : 0.0;
        double row_sum = 0.0;
        for (Index k = lr.row_offsets()[i]; k < lr.row_offsets()[i + 1]; ++k)
          row_sum += lr.values()[k] * x(Eigen::Index(lr.col_indices()[k] + mm * j));
        double col_sum = 0.0;
        for (Index k = lc.row_offsets()[j]; k < lc.row_offsets()[j + 1]; ++k)
          col_sum += lc.values()[k] * x(Eigen::Index(i + mm * lc.col_indices()[k]));
        acc += alpha_ * row_sum + beta_ * col_sum;
        y(Eigen::Index(l)) = acc;
      }
  }

  GraphLaplacian row_;
  GraphLaplacian col_;
  double alpha_;
  double beta_;
  Vector sample_diag_;
};

inline Vector product_apply(const ProductOperator& op, const Vector& x) {
  Vector y;
  op.apply(x, y);
  return y;
}

/// Number of connected components of the Cartesian product graph.
inline Index product_component_count(const ProductOperator& op) {
  return component_count(op.row_graph()) * component_count(op.col_graph());
}

/// Product-graph components (pairs of factor components) holding no sample.
/// Q is singular exactly when this is nonempty (alpha, beta > 0).
inline std::vector<std::pair<Index, Index>> unsampled_components(const ProductOperator& op) {
  Index cr = 0, cc = 0;
  const auto lr = connected_components(op.row_graph().weights(), &cr);
  const auto lc = connected_components(op.col_graph().weights(), &cc);
  std::vector<char> hit(cr * cc, 0);
  for (Index j = 0; j < op.n(); ++j)
    for (Index i = 0; i < op.m(); ++i)
      if (op.sampled(i + op.m() * j)) hit[lr[i] + cr * lc[j]] = 1;
  std::vector<std::pair<Index, Index>> out;
  for (Index b = 0; b < cc; ++b)
    for (Index a = 0; a < cr; ++a)
      if (!hit[a + cr * b]) out.emplace_back(a, b);
  return out;
}

}  // namespace amc::graphs
