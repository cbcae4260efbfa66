#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "amc/graphs/index.hpp"

namespace amc::sampling {

using linalg::Index;
using linalg::Vector;
using linalg::DenseMatrix;

// Per linear index (column-major, length m*n): nonzero = may be sampled.
using IndexMask = std::vector<char>;

/// Ordered selection of matrix entries, with the linear-index view.
class SampleSet {
 public:
  SampleSet() = default;
  SampleSet(Index m, Index n, Index budget) : m_(m), n_(n), budget_(budget) {}

  Index m() const { return m_; }
  Index n() const { return n_; }
  Index budget() const { return budget_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  const std::vector<std::pair<Index, Index>>& pairs() const { return pairs_; }
  const std::vector<Index>& linear() const { return linear_; }
  bool contains(Index l) const { return members_.count(l) > 0; }

  void add(Index i, Index j) {
    const Index l = graphs::lin_index(i, j, m_, n_);
    if (pairs_.size() >= budget_) throw InvalidArgument("SampleSet: budget exhausted");
    if (!members_.insert(l).second)
      throw InvalidArgument("SampleSet: entry (" + std::to_string(i) + "," + std::to_string(j) +
                            ") selected twice");
    pairs_.emplace_back(i, j);
    linear_.push_back(l);
  }

  void add_linear(Index l) {
    const auto [i, j] = graphs::mat_index(l, m_, n_);
    add(i, j);
  }

 private:
  Index m_ = 0;
  Index n_ = 0;
  Index budget_ = 0;
  std::vector<std::pair<Index, Index>> pairs_;
  std::vector<Index> linear_;
  std::unordered_set<Index> members_;
};

inline IndexMask full_mask(Index size) { return IndexMask(size, 1); }

inline IndexMask mask_from_indices(Index size, const std::vector<Index>& idx) {
  IndexMask mask(size, 0);
  for (Index l : idx) {
    if (l >= size) throw DimensionError("mask_from_indices: index " + std::to_string(l) + " out of range");
    mask[l] = 1;
  }
  return mask;
}

namespace detail {

// Candidates = allowed and not already taken. Throws when fewer than k remain.
inline Index check_pool(const IndexMask* allowed, Index size, const std::vector<char>& taken, Index k,
                        const char* who) {
  if (allowed && allowed->size() != size)
    throw DimensionError(std::string(who) + ": allowed mask has length " +
                         std::to_string(allowed->size()) + ", expected " + std::to_string(size));
  Index avail = 0;
  for (Index l = 0; l < size; ++l)
    if ((!allowed || (*allowed)[l]) && !taken[l]) ++avail;
  if (k > avail)
    throw InvalidArgument(std::string(who) + ": budget " + std::to_string(k) + " exceeds pool of " +
                          std::to_string(avail));
  return avail;
}

// Lowest candidate index whose |phi| is within tie_tol of the candidate
// maximum. Returns phi.size() when there is no candidate.
template <typename Pred>
Index argmax_abs(const Vector& phi, double tie_tol, Pred candidate) {
  const Index size = static_cast<Index>(phi.size());
  double top = -1.0;
  for (Index l = 0; l < size; ++l)
    if (candidate(l)) top = std::max(top, std::abs(phi(Eigen::Index(l))));
  if (top < 0.0) return size;
  for (Index l = 0; l < size; ++l)
    if (candidate(l) && std::abs(phi(Eigen::Index(l))) >= top - tie_tol) return l;
  return size;
}

}  // namespace detail

}  // namespace amc::sampling
