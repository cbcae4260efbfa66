#pragma once

#include "amc/graphs/product.hpp"
#include "amc/sampling/sample_set.hpp"

namespace amc::sampling {

using linalg::SparseSym;

/// y = scale * L x + shift o x, without forming the sum.
class ShiftedLaplacian {
 public:
  ShiftedLaplacian(const SparseSym& l, double scale, Vector shift)
      : l_(&l), scale_(scale), shift_(std::move(shift)) {
    if (static_cast<Index>(shift_.size()) != l.dim()) throw DimensionError("ShiftedLaplacian: shift length");
  }
  Index dim() const { return l_->dim(); }
  void apply(const Vector& x, Vector& y) const {
    l_->apply(x, y);
    y = scale_ * y + shift_.cwiseProduct(x);
  }
  Vector diagonal() const { return scale_ * l_->diagonal() + shift_; }
  const Vector& shift() const { return shift_; }

 private:
  const SparseSym* l_;
  double scale_;
  Vector shift_;
};

/// Q = Q1 + Q2 with Q1 = q A~ + alpha I_n (x) L_r (block diagonal, n clusters
/// of size m) and Q2 = (1 - q) A~ + beta L_c (x) I_m, which the perfect
/// shuffle P turns into the block diagonal Q2^ = (1 - q) A^ + beta I_m (x) L_c
/// (m groups of size n).
class SplitView {
 public:
  SplitView(const graphs::ProductOperator& op, double q) : op_(&op), q_(q) {
    if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("build_split: q must lie in (0, 1)");
  }

  double q() const { return q_; }
  Index m() const { return op_->m(); }
  Index n() const { return op_->n(); }

  // Diagonal of A~_j: which rows of column j are sampled.
  Vector cluster_indicator(Index j) const {
    check(j < n(), "cluster index");
    return op_->sample_diag().segment(Eigen::Index(m() * j), Eigen::Index(m()));
  }

  // Diagonal of A^_i: which columns of row i are sampled.
  Vector group_indicator(Index i) const {
    check(i < m(), "group index");
    Vector d(static_cast<Eigen::Index>(n()));
    for (Index j = 0; j < n(); ++j) d(Eigen::Index(j)) = op_->sample_diag()(Eigen::Index(i + m() * j));
    return d;
  }

  SparseSym cluster(Index j) const {
    return SparseSym::diagonal(cluster_indicator(j)).combine(q_, op_->row_graph().laplacian(), op_->alpha());
  }

  SparseSym group(Index i) const {
    return SparseSym::diagonal(group_indicator(i)).combine(1.0 - q_, op_->col_graph().laplacian(), op_->beta());
  }

  // pi(i + m j) = j + n i.
  Index perm(Index l) const {
    const auto [i, j] = graphs::mat_index(l, m(), n());
    return j + n() * i;
  }

  DenseMatrix permutation_matrix() const {
    DenseMatrix p = DenseMatrix::Zero(Eigen::Index(op_->dim()), Eigen::Index(op_->dim()));
    for (Index l = 0; l < op_->dim(); ++l) p(Eigen::Index(perm(l)), Eigen::Index(l)) = 1.0;
    return p;
  }

  // Dense Q1 and Q2 for small-instance checks.
  DenseMatrix q1_dense() const {
    const Index mm = m();
    DenseMatrix out = DenseMatrix::Zero(Eigen::Index(op_->dim()), Eigen::Index(op_->dim()));
    for (Index j = 0; j < n(); ++j)
      out.block(Eigen::Index(mm * j), Eigen::Index(mm * j), Eigen::Index(mm), Eigen::Index(mm)) =
          cluster(j).to_dense();
    return out;
  }

  DenseMatrix q2_dense() const {
    const DenseMatrix p = permutation_matrix();
    return p.transpose() * q2_hat_dense() * p;
  }

  DenseMatrix q2_hat_dense() const {
    const Index nn = n();
    DenseMatrix out = DenseMatrix::Zero(Eigen::Index(op_->dim()), Eigen::Index(op_->dim()));
    for (Index i = 0; i < m(); ++i)
      out.block(Eigen::Index(nn * i), Eigen::Index(nn * i), Eigen::Index(nn), Eigen::Index(nn)) =
          group(i).to_dense();
    return out;
  }

 private:
  static void check(bool ok, const char* what) {
    if (!ok) throw DimensionError(std::string("SplitView: ") + what + " out of range");
  }

  const graphs::ProductOperator* op_;
  double q_;
};

inline SplitView build_split(const graphs::ProductOperator& op, double q) { return SplitView(op, q); }

}  // namespace amc::sampling
