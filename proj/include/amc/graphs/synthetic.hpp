#pragma once

#include <algorithm>
#include <random>

#include "amc/graphs/builders.hpp"
#include "amc/graphs/rating.hpp"
#include "amc/linalg/dense.hpp"

namespace amc::graphs {

struct SyntheticOptions {
  double p_in = 0.5;
  double p_out = 0.02;
  double perturbation = 0.5;  // max |.| of the low-frequency term before clipping
  int smooth_modes = 3;       // nonconstant eigenvectors per factor graph
};

struct SyntheticNetflix {
  RatingMatrix observed;   // every entry, truth + noise
  DenseMatrix truth;       // clipped to [1, 5]
  DenseMatrix noise;       // observed - truth
  CommunityGraph rows;
  CommunityGraph cols;
};

/// Dual-smooth rating matrix on planted-partition row and column graphs.
///
/// Truth = clip(B + P, 1, 5): B holds one level from {1..5} per
/// (row community, column community) block, P = V C U^T mixes the lowest
/// nonconstant Laplacian eigenvectors of both factor graphs with Gaussian
/// coefficients scaled to max |P| = perturbation. Observations add i.i.d.
/// N(0, noise_sigma^2) and are not clipped.
inline SyntheticNetflix synthetic_netflix(Index m, Index n, Index n_row_comm, Index n_col_comm,
                                          double noise_sigma, std::uint64_t seed,
                                          const SyntheticOptions& opts = {}) {
  if (m < 2 || n < 2) throw InvalidArgument("synthetic_netflix: need at least 2 rows and 2 columns");
  if (n_row_comm == 0 || n_col_comm == 0 || n_row_comm > m || n_col_comm > n)
    throw InvalidArgument("synthetic_netflix: community counts must be in [1, dims]");
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("synthetic_netflix: noise_sigma must be >= 0");

  std::mt19937_64 rng(seed);
  SyntheticNetflix out;
  out.rows = community_graph(m, n_row_comm, opts.p_in, opts.p_out, rng());
  out.cols = community_graph(n, n_col_comm, opts.p_in, opts.p_out, rng());

  std::uniform_int_distribution<int> level(1, 5);
  DenseMatrix block_level(static_cast<Eigen::Index>(n_row_comm), static_cast<Eigen::Index>(n_col_comm));
  for (Eigen::Index b = 0; b < block_level.cols(); ++b)
    for (Eigen::Index a = 0; a < block_level.rows(); ++a) block_level(a, b) = level(rng);

  const auto er = linalg::dense_sym_eig(out.rows.graph.laplacian().to_dense());
  const auto ec = linalg::dense_sym_eig(out.cols.graph.laplacian().to_dense());
  const int kr = std::min<int>(opts.smooth_modes, int(m) - 1);
  const int kc = std::min<int>(opts.smooth_modes, int(n) - 1);
  DenseMatrix v(static_cast<Eigen::Index>(m), kr), u(static_cast<Eigen::Index>(n), kc);
  for (int a = 0; a < kr; ++a) v.col(a) = er[std::size_t(a) + 1].vec;
  for (int b = 0; b < kc; ++b) u.col(b) = ec[std::size_t(b) + 1].vec;
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix coeff(kr, kc);
  for (Eigen::Index b = 0; b < coeff.cols(); ++b)
    for (Eigen::Index a = 0; a < coeff.rows(); ++a) coeff(a, b) = normal(rng);
  DenseMatrix pert = v * coeff * u.transpose();
  const double peak = pert.cwiseAbs().maxCoeff();
  if (peak > 0.0) pert *= opts.perturbation / peak;

  out.truth.resize(Eigen::Index(m), Eigen::Index(n));
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) {
      const double base = block_level(Eigen::Index(out.rows.labels[i]), Eigen::Index(out.cols.labels[j]));
      out.truth(Eigen::Index(i), Eigen::Index(j)) =
          std::clamp(base + pert(Eigen::Index(i), Eigen::Index(j)), 1.0, 5.0);
    }

  out.noise = DenseMatrix::Zero(Eigen::Index(m), Eigen::Index(n));
  if (noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (Eigen::Index j = 0; j < out.noise.cols(); ++j)
      for (Eigen::Index i = 0; i < out.noise.rows(); ++i) out.noise(i, j) = noise(rng);
  }
  out.observed = RatingMatrix::from_dense(out.truth + out.noise);
  return out;
}

}  // namespace amc::graphs
