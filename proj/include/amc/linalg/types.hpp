#pragma once

#include <Eigen/Dense>

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

#include "amc/error.hpp"

namespace amc::linalg {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using Index = std::size_t;

struct EigenPair {
  double value = 0.0;
  Vector vec;
};

// Options shared by the iterative solvers. Defaults differ per solver, see
// cg_defaults() and lobpcg_defaults().
struct SolverOptions {
  double tol = 1e-8;
  std::size_t max_iter = 500;
  std::uint64_t seed = 0;
  bool jacobi = false;  // diagonal preconditioner (LOBPCG and CG)

  void validate() const {
    if (!(tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
    if (max_iter < 1) throw InvalidArgument("solver max_iter must be >= 1");
  }
};

// CG: tol 1e-8, max_iter 10 * n (n = operator dimension, filled at solve time
// when max_iter == 0).
inline SolverOptions cg_defaults() { return {.tol = 1e-8, .max_iter = 0, .seed = 0}; }

inline SolverOptions lobpcg_defaults() { return {.tol = 1e-6, .max_iter = 500, .seed = 0}; }

// A symmetric linear operator usable by the iterative solvers.
template <typename Op>
concept LinearOperator = requires(const Op& op, const Vector& x, Vector& y) {
  { op.dim() } -> std::convertible_to<Index>;
  op.apply(x, y);
};

template <typename Op>
concept HasDiagonal = requires(const Op& op) {
  { op.diagonal() } -> std::convertible_to<Vector>;
};

// Dense symmetric matrix viewed as an operator (tests and small factor graphs).
class DenseOperator {
 public:
  explicit DenseOperator(DenseMatrix a) : a_(std::move(a)) {
    if (a_.rows() != a_.cols()) throw DimensionError("DenseOperator: matrix is not square");
  }
  Index dim() const { return static_cast<Index>(a_.rows()); }
  void apply(const Vector& x, Vector& y) const { y.noalias() = a_ * x; }
  Vector diagonal() const { return a_.diagonal(); }
  const DenseMatrix& matrix() const { return a_; }

 private:
  DenseMatrix a_;
};

// Uniform random point on the unit sphere.
inline Vector random_unit_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(n));
  do {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

inline Vector random_unit_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_unit_vector(n, rng);
}

}  // namespace amc::linalg
