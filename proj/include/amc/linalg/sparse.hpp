#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "amc/linalg/types.hpp"

namespace amc::linalg {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Symmetric sparse matrix in compressed sparse row form.
///
/// Both triangles are stored. Construction validates symmetry (1e-12), rejects
/// duplicate (row, col) pairs and sorts columns inside each row, so SpMV
/// accumulates every row in ascending column order.
class SparseSym {
 public:
  static constexpr double kSymmetryTol = 1e-12;

  SparseSym() = default;

  explicit SparseSym(Index n) : n_(n), row_offsets_(n + 1, 0) {}

  /// Builds from entries covering both triangles. Exact zeros are kept.
  static SparseSym from_triplets(Index n, std::vector<Triplet> entries) {
    for (const auto& t : entries) {
      if (t.row >= n || t.col >= n) throw DimensionError("SparseSym: index out of range");
      if (!std::isfinite(t.value)) throw InvalidArgument("SparseSym: non-finite value");
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    SparseSym s(n);
    s.col_indices_.reserve(entries.size());
    s.values_.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (k > 0 && entries[k].row == entries[k - 1].row && entries[k].col == entries[k - 1].col)
        throw InvalidArgument("SparseSym: duplicate entry (" + std::to_string(entries[k].row) +
                              "," + std::to_string(entries[k].col) + ")");
      s.row_offsets_[entries[k].row + 1]++;
      s.col_indices_.push_back(entries[k].col);
      s.values_.push_back(entries[k].value);
    }
    for (Index i = 0; i < n; ++i) s.row_offsets_[i + 1] += s.row_offsets_[i];
    s.check_symmetric();
    return s;
  }

  /// Builds from upper-triangle entries (i <= j); the lower triangle is mirrored.
  static SparseSym from_upper(Index n, const std::vector<Triplet>& upper) {
    std::vector<Triplet> all;
    all.reserve(2 * upper.size());
    for (const auto& t : upper) {
      if (t.row > t.col) throw InvalidArgument("SparseSym::from_upper: entry below diagonal");
      all.push_back(t);
      if (t.row != t.col) all.push_back({t.col, t.row, t.value});
    }
    return from_triplets(n, std::move(all));
  }

  static SparseSym identity(Index n) {
    std::vector<Triplet> d;
    d.reserve(n);
    for (Index i = 0; i < n; ++i) d.push_back({i, i, 1.0});
    return from_triplets(n, std::move(d));
  }

  static SparseSym diagonal(const Vector& diag) {
    std::vector<Triplet> d;
    for (Eigen::Index i = 0; i < diag.size(); ++i)
      d.push_back({static_cast<Index>(i), static_cast<Index>(i), diag(i)});
    return from_triplets(static_cast<Index>(diag.size()), std::move(d));
  }

  /// Dense input must be symmetric; zeros are dropped.
  static SparseSym from_dense(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("SparseSym::from_dense: not square");
    std::vector<Triplet> t;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        if (a(i, j) != 0.0) t.push_back({Index(i), Index(j), a(i, j)});
    return from_triplets(static_cast<Index>(a.rows()), std::move(t));
  }

  Index dim() const { return n_; }
  Index nnz() const { return values_.size(); }
  const std::vector<Index>& row_offsets() const { return row_offsets_; }
  const std::vector<Index>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }

  /// Entry (i, j) or 0 when absent. O(log row length).
  double at(Index i, Index j) const {
    auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
    auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - col_indices_.begin())];
  }

  Vector diagonal() const {
    Vector d = Vector::Zero(static_cast<Eigen::Index>(n_));
    for (Index i = 0; i < n_; ++i) d(Eigen::Index(i)) = at(i, i);
    return d;
  }

  /// y = A x, rows reduced in ascending column order.
  void apply(const Vector& x, Vector& y) const {
    if (static_cast<Index>(x.size()) != n_)
      throw DimensionError("spmv: vector length " + std::to_string(x.size()) +
                           " does not match dimension " + std::to_string(n_));
    y.resize(static_cast<Eigen::Index>(n_));
    for (Index i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
        acc += values_[k] * x(Eigen::Index(col_indices_[k]));
      y(Eigen::Index(i)) = acc;
    }
  }

  DenseMatrix to_dense() const {
    DenseMatrix a = DenseMatrix::Zero(Eigen::Index(n_), Eigen::Index(n_));
    for (Index i = 0; i < n_; ++i)
      for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
        a(Eigen::Index(i), Eigen::Index(col_indices_[k])) = values_[k];
    return a;
  }

  std::vector<Triplet> triplets() const {
    std::vector<Triplet> t;
    t.reserve(values_.size());
    for (Index i = 0; i < n_; ++i)
      for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
        t.push_back({i, col_indices_[k], values_[k]});
    return t;
  }

  /// a * this + b * other, entries merged by position.
  SparseSym combine(double a, const SparseSym& other, double b) const {
    if (other.n_ != n_) throw DimensionError("SparseSym::combine: dimension mismatch");
    std::vector<Triplet> t;
    t.reserve(nnz() + other.nnz());
    for (Index i = 0; i < n_; ++i) {
      Index p = row_offsets_[i], pe = row_offsets_[i + 1];
      Index q = other.row_offsets_[i], qe = other.row_offsets_[i + 1];
      while (p < pe || q < qe) {
        if (q >= qe || (p < pe && col_indices_[p] < other.col_indices_[q])) {
          t.push_back({i, col_indices_[p], a * values_[p]});
          ++p;
        } else if (p >= pe || other.col_indices_[q] < col_indices_[p]) {
          t.push_back({i, other.col_indices_[q], b * other.values_[q]});
          ++q;
        } else {
          t.push_back({i, col_indices_[p], a * values_[p] + b * other.values_[q]});
          ++p;
          ++q;
        }
      }
    }
    return from_triplets(n_, std::move(t));
  }

 private:
  void check_symmetric() const {
    for (Index i = 0; i < n_; ++i)
      for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
        const Index j = col_indices_[k];
        if (!has_entry(j, i) || std::abs(at(j, i) - values_[k]) > kSymmetryTol)
          throw InvalidArgument("SparseSym: not symmetric at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
      }
  }

  bool has_entry(Index i, Index j) const {
    auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
    auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
    return std::binary_search(first, last, j);
  }

  Index n_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

/// Returns A x.
inline Vector spmv(const SparseSym& a, const Vector& x) {
  Vector y;
  a.apply(x, y);
  return y;
}

// --- edge-list serialization -----------------------------------------------
//
// Text format, one entry per line: `i j value`, 0-based, upper triangle only
// (i <= j). Lines starting with '#' are comments; `# n=<count>` fixes the
// dimension, otherwise it is max index + 1.

inline void write_edge_list(std::ostream& out, const SparseSym& a) {
  out << "# n=" << a.dim() << "\n";
  out << std::setprecision(17);
  for (const auto& t : a.triplets())
    if (t.row <= t.col) out << t.row << ' ' << t.col << ' ' << t.value << '\n';
}

inline SparseSym read_edge_list(std::istream& in, const std::string& source = "<stream>") {
  std::vector<Triplet> upper;
  std::string line;
  std::size_t lineno = 0;
  std::size_t declared = 0;
  bool has_declared = false;
  Index max_index = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      const auto pos = line.find("n=");
      if (pos != std::string::npos) {
        try {
          declared = std::stoull(line.substr(pos + 2));
          has_declared = true;
        } catch (const std::exception&) {
          throw ParseError(source, lineno, "bad dimension directive");
        }
      }
      continue;
    }
    std::istringstream ls(line);
    long long i = -1, j = -1;
    double v = 0.0;
    std::string rest;
    if (!(ls >> i >> j >> v) || (ls >> rest) || i < 0 || j < 0)
      throw ParseError(source, lineno, "expected `i j value`");
    if (i > j) throw ParseError(source, lineno, "entry below the diagonal (upper triangle only)");
    upper.push_back({Index(i), Index(j), v});
    max_index = std::max(max_index, Index(j));
    any = true;
  }
  const Index n = has_declared ? declared : (any ? max_index + 1 : 0);
  if (any && max_index >= n) throw ParseError(source, lineno, "index exceeds declared dimension");
  try {
    return SparseSym::from_upper(n, upper);
  } catch (const InvalidArgument& e) {
    throw ParseError(source, lineno, e.what());
  }
}

inline void save_edge_list(const std::string& path, const SparseSym& a) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_edge_list(out, a);
}

inline SparseSym load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_edge_list(in, path);
}

}  // namespace amc::linalg
