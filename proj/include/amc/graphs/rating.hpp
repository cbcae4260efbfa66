#pragma once

#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "amc/graphs/index.hpp"
#include "amc/linalg/types.hpp"

namespace amc::graphs {

struct Rating {
  linalg::Index row;
  linalg::Index col;
  double value;
};

/// Partially observed m x n matrix as a list of (row, col, value) triplets.
class RatingMatrix {
 public:
  RatingMatrix() = default;

  RatingMatrix(linalg::Index m, linalg::Index n) : m_(m), n_(n) {}

  RatingMatrix(linalg::Index m, linalg::Index n, const std::vector<Rating>& entries) : m_(m), n_(n) {
    entries_.reserve(entries.size());
    for (const auto& e : entries) add(e.row, e.col, e.value);
  }

  /// Every entry of a dense matrix (column-major insertion order).
  static RatingMatrix from_dense(const linalg::DenseMatrix& x) {
    RatingMatrix r(static_cast<linalg::Index>(x.rows()), static_cast<linalg::Index>(x.cols()));
    r.entries_.reserve(static_cast<std::size_t>(x.size()));
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      for (Eigen::Index i = 0; i < x.rows(); ++i) r.add(linalg::Index(i), linalg::Index(j), x(i, j));
    return r;
  }

  void add(linalg::Index row, linalg::Index col, double value) {
    if (row >= m_ || col >= n_)
      throw DimensionError("RatingMatrix: entry (" + std::to_string(row) + "," + std::to_string(col) +
                           ") outside " + std::to_string(m_) + "x" + std::to_string(n_));
    if (!std::isfinite(value)) throw InvalidArgument("RatingMatrix: non-finite value");
    const linalg::Index l = row + m_ * col;
    if (!position_.emplace(l, entries_.size()).second)
      throw InvalidArgument("RatingMatrix: duplicate entry (" + std::to_string(row) + "," +
                            std::to_string(col) + ")");
    entries_.push_back({row, col, value});
  }

  linalg::Index m() const { return m_; }
  linalg::Index n() const { return n_; }
  const std::vector<Rating>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  double density() const {
    return m_ != 0 && n_ != 0 ? static_cast<double>(entries_.size()) / static_cast<double>(m_ * n_) : 0.0;
  }

  bool known(linalg::Index row, linalg::Index col) const {
    return row < m_ && col < n_ && position_.count(row + m_ * col) > 0;
  }

  /// Value at a known entry; throws when unknown.
  double value(linalg::Index row, linalg::Index col) const {
    auto it = position_.find(row + m_ * col);
    if (row >= m_ || col >= n_ || it == position_.end())
      throw InvalidArgument("RatingMatrix: entry (" + std::to_string(row) + "," + std::to_string(col) +
                            ") is not known");
    return entries_[it->second].value;
  }

  /// Dense matrix with unknown entries set to fill.
  linalg::DenseMatrix to_dense(double fill = 0.0) const {
    linalg::DenseMatrix x =
        linalg::DenseMatrix::Constant(Eigen::Index(m_), Eigen::Index(n_), fill);
    for (const auto& e : entries_) x(Eigen::Index(e.row), Eigen::Index(e.col)) = e.value;
    return x;
  }

  /// Linear indices (column-major) of the known entries, in insertion order.
  std::vector<linalg::Index> known_indices() const {
    std::vector<linalg::Index> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.row + m_ * e.col);
    return out;
  }

 private:
  linalg::Index m_ = 0;
  linalg::Index n_ = 0;
  std::vector<Rating> entries_;
  std::unordered_map<linalg::Index, std::size_t> position_;
};

}  // namespace amc::graphs
