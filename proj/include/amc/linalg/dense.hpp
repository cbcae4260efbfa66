#pragma once

#include <Eigen/Eigenvalues>

#include <string>
#include <vector>

#include "amc/linalg/types.hpp"

namespace amc::linalg {

inline constexpr Index kDenseOracleCap = 512;

/// Full spectrum of a dense symmetric matrix, ascending, orthonormal vectors.
inline std::vector<EigenPair> dense_sym_eig(const DenseMatrix& a, Index cap = kDenseOracleCap) {
  if (a.rows() != a.cols()) throw DimensionError("dense_sym_eig: matrix is not square");
  if (static_cast<Index>(a.rows()) > cap)
    throw DimensionError("dense_sym_eig: dimension " + std::to_string(a.rows()) +
                         " exceeds oracle cap " + std::to_string(cap));
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (a.size() > 0 && asym > 1e-10)
    throw InvalidArgument("dense_sym_eig: asymmetry " + std::to_string(asym) + " beyond 1e-10");

  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(a);
  if (solver.info() != Eigen::Success) throw Error("dense_sym_eig: decomposition failed");
  std::vector<EigenPair> out;
  out.reserve(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index k = 0; k < a.rows(); ++k)
    out.push_back({solver.eigenvalues()(k), solver.eigenvectors().col(k)});
  return out;
}

// Eigenvalues only, ascending.
inline Vector dense_sym_eigenvalues(const DenseMatrix& a, Index cap = kDenseOracleCap) {
  if (static_cast<Index>(a.rows()) > cap)
    throw DimensionError("dense_sym_eigenvalues: dimension above oracle cap");
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

inline double dense_lambda_min(const DenseMatrix& a, Index cap = kDenseOracleCap) {
  return dense_sym_eigenvalues(a, cap)(0);
}

inline double dense_lambda_max(const DenseMatrix& a, Index cap = kDenseOracleCap) {
  const Vector ev = dense_sym_eigenvalues(a, cap);
  return ev(ev.size() - 1);
}

}  // namespace amc::linalg
