#pragma once

#include <Eigen/SVD>

#include "amc/linalg/dense.hpp"
#include "amc/sampling/gcs.hpp"

namespace amc::sampling {

/// Low-frequency bases of both factor graphs. T = U_k1 (x) V_k2 maps the
/// k2 x k1 spectral block (column-major, length k1*k2) to vec(X).
struct BandlimitedBasis {
  DenseMatrix u;  // n x k1, lowest eigenvectors of L_c
  DenseMatrix v;  // m x k2, lowest eigenvectors of L_r

  Index m() const { return static_cast<Index>(v.rows()); }
  Index n() const { return static_cast<Index>(u.rows()); }
  Index k1() const { return static_cast<Index>(u.cols()); }
  Index k2() const { return static_cast<Index>(v.cols()); }
  Index rank() const { return k1() * k2(); }

  // T(l, c) with l = i + m j and c = a + k2 b.
  double at(Index l, Index c) const {
    const Index i = l % m(), j = l / m(), a = c % k2(), b = c / k2();
    return u(Eigen::Index(j), Eigen::Index(b)) * v(Eigen::Index(i), Eigen::Index(a));
  }

  // T xf = vec(V Xf U^T).
  Vector apply(const Vector& xf) const {
    if (static_cast<Index>(xf.size()) != rank()) throw DimensionError("BandlimitedBasis::apply: length");
    const DenseMatrix x = v * xf.reshaped(Eigen::Index(k2()), Eigen::Index(k1())) * u.transpose();
    return x.reshaped();
  }

  // Rows of T at the given linear indices (C T).
  DenseMatrix rows(const std::vector<Index>& idx) const {
    DenseMatrix ct(Eigen::Index(idx.size()), Eigen::Index(rank()));
    for (std::size_t r = 0; r < idx.size(); ++r) {
      if (idx[r] >= m() * n()) throw DimensionError("BandlimitedBasis::rows: index out of range");
      for (Index c = 0; c < rank(); ++c) ct(Eigen::Index(r), Eigen::Index(c)) = at(idx[r], c);
    }
    return ct;
  }

  DenseMatrix materialize() const {
    std::vector<Index> all(m() * n());
    for (Index l = 0; l < all.size(); ++l) all[l] = l;
    return rows(all);
  }
};

inline BandlimitedBasis bandlimited_basis(const graphs::GraphLaplacian& row_graph,
                                          const graphs::GraphLaplacian& col_graph, Index k1, Index k2) {
  const Index m = row_graph.n(), n = col_graph.n();
  if (k1 < 1 || k1 > n || k2 < 1 || k2 > m)
    throw InvalidArgument("bandlimited_basis: need 1 <= k1 <= n and 1 <= k2 <= m");
  const auto er = linalg::dense_sym_eig(row_graph.laplacian().to_dense());
  const auto ec = linalg::dense_sym_eig(col_graph.laplacian().to_dense());
  BandlimitedBasis b{DenseMatrix(Eigen::Index(n), Eigen::Index(k1)), DenseMatrix(Eigen::Index(m), Eigen::Index(k2))};
  for (Index c = 0; c < k1; ++c) b.u.col(Eigen::Index(c)) = ec[c].vec;
  for (Index c = 0; c < k2; ++c) b.v.col(Eigen::Index(c)) = er[c].vec;
  return b;
}

inline constexpr double kAoptEpsilon = 1e-8;

/// A-optimal design value Tr[(T^T C^T C T + eps I)^-1] of the sampled rows.
///
/// Evaluated from the singular values s of C T as sum 1/(s^2 + eps) plus
/// (k1 k2 - |S|)/eps for the directions C T cannot reach. With eps = 0 a
/// rank-deficient selection throws.
inline double aopt_objective(const BandlimitedBasis& basis, const std::vector<Index>& s,
                             double eps = kAoptEpsilon) {
  if (!(eps >= 0.0)) throw InvalidArgument("aopt_objective: eps must be >= 0");
  const Index k = basis.rank();
  Vector sv;
  if (!s.empty()) {
    Eigen::JacobiSVD<DenseMatrix> svd(basis.rows(s));
    sv = svd.singularValues();
  }
  const Index missing = k - std::min<Index>(k, static_cast<Index>(sv.size()));
  double h = 0.0;
  for (Eigen::Index t = 0; t < sv.size(); ++t) {
    const double d = sv(t) * sv(t) + eps;
    if (!(d > 0.0) || (eps == 0.0 && sv(t) <= 1e-12 * std::max(1.0, sv(0))))
      throw SingularSystemError("aopt_objective: sampled basis is rank deficient");
    h += 1.0 / d;
  }
  if (missing) {
    if (eps == 0.0) throw SingularSystemError("aopt_objective: fewer samples than k1*k2");
    h += double(missing) / eps;
  }
  return h;
}

inline double aopt_objective(const BandlimitedBasis& basis, const SampleSet& s, double eps = kAoptEpsilon) {
  return aopt_objective(basis, s.linear(), eps);
}

struct AoptOptions {
  Index pool = 10;  // L: candidates ranked by |phi| that get evaluated
  double eps = kAoptEpsilon;
  // Objective values within this relative distance count as tied.
  double h_tie_rtol = 1e-12;
  GcsOptions gcs;
};

struct AoptResult {
  SampleSet samples;
  std::vector<double> objective_trace;  // h after each pick
  std::vector<std::size_t> iter_counts;
};

/// Greedy A-optimal sampling restricted to a local pool: each step ranks the
/// candidates by |phi| of the current operator (first eigenvector, GCS tie
/// rule), evaluates h(S + {l}) on the top L and keeps the minimizer (lowest
/// index among values within h_tie_rtol), then shifts that entry's disc.
inline AoptResult aopt_local_search(const BandlimitedBasis& basis, ProductOperator op, Index k,
                                    const AoptOptions& opts = {}, const IndexMask* allowed = nullptr) {
  const Index size = op.dim();
  if (basis.m() != op.m() || basis.n() != op.n()) throw DimensionError("aopt_local_search: basis shape");
  if (opts.pool < 1 || opts.pool > size) throw InvalidArgument("aopt_local_search: pool size must lie in [1, m*n]");
  std::vector<char> taken(size, 0);
  for (Index l = 0; l < size; ++l) taken[l] = op.sampled(l) ? 1 : 0;
  detail::check_pool(allowed, size, taken, k, "aopt_local_search");

  std::vector<Index> chosen;
  for (Index l = 0; l < size; ++l)
    if (taken[l]) chosen.push_back(l);
  AoptResult out{SampleSet(op.m(), op.n(), k), {}, {}};
  detail::FirstEigvec eig(opts.gcs);
  for (Index t = 0; t < k; ++t) {
    const auto step = eig.next(op, t, "aopt_local_search");
    const Vector& phi = eig.warm;
    std::vector<char> ranked(size, 0);
    Index best = size;
    double best_h = 0.0;
    for (Index r = 0; r < opts.pool; ++r) {
      const Index cand = detail::argmax_abs(phi, opts.gcs.tie_tol, [&](Index l) {
        return !taken[l] && !ranked[l] && (!allowed || (*allowed)[l]);
      });
      if (cand == size) break;
      ranked[cand] = 1;
      chosen.push_back(cand);
      const double h = aopt_objective(basis, chosen, opts.eps);
      chosen.pop_back();
      const double tol = opts.h_tie_rtol * std::abs(best_h);
      if (best == size || h < best_h - tol || (h <= best_h + tol && cand < best)) {
        best = cand;
        best_h = h;
      }
    }
    taken[best] = 1;
    chosen.push_back(best);
    op.add_sample(best);
    out.samples.add_linear(best);
    out.objective_trace.push_back(best_h);
    out.iter_counts.push_back(step.iterations);
  }
  return out;
}

/// Least-squares fit of a dual-bandlimited signal to the samples y (in the
/// order of s): returns the m x n matrix T (C T)^+ y. Throws when C T has
/// rank below k1 k2.
inline DenseMatrix bandlimited_reconstruct(const BandlimitedBasis& basis, const std::vector<Index>& s,
                                           const Vector& y) {
  if (static_cast<Index>(y.size()) != s.size()) throw DimensionError("bandlimited_reconstruct: |y| != |S|");
  const Index k = basis.rank();
  if (s.size() < k)
    throw SingularSystemError("bandlimited_reconstruct: sampled basis has rank at most " +
                              std::to_string(s.size()) + " < k1*k2 = " + std::to_string(k));
  const DenseMatrix ct = basis.rows(s);
  Eigen::ColPivHouseholderQR<DenseMatrix> qr(ct);
  qr.setThreshold(1e-10);
  if (static_cast<Index>(qr.rank()) < k)
    throw SingularSystemError("bandlimited_reconstruct: sampled basis has rank " + std::to_string(qr.rank()) +
                              " < k1*k2 = " + std::to_string(k));
  const Vector xf = qr.solve(y);
  return basis.apply(xf).reshaped(Eigen::Index(basis.m()), Eigen::Index(basis.n()));
}

inline DenseMatrix bandlimited_reconstruct(const BandlimitedBasis& basis, const SampleSet& s, const Vector& y) {
  return bandlimited_reconstruct(basis, s.linear(), y);
}

}  // namespace amc::sampling
