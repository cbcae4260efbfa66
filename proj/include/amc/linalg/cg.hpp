#pragma once

#include <cmath>
#include <optional>

#include "amc/linalg/types.hpp"

namespace amc::linalg {

struct CgResult {
  Vector x;
  double residual = 0.0;  // ||A x - b|| / ||b||, recomputed from the returned x
  std::size_t iterations = 0;
};

/// Conjugate gradient for a symmetric positive definite operator.
///
/// Stops when the relative residual drops to opts.tol. max_iter == 0 means
/// 10 * dim. Throws ConvergenceError (carrying the final residual) when the
/// cap is hit, and Error on NaN.
template <LinearOperator Op>
CgResult cg_solve(const Op& op, const Vector& b, SolverOptions opts = cg_defaults(),
                  const std::optional<Vector>& x0 = std::nullopt) {
  const Index n = op.dim();
  if (static_cast<Index>(b.size()) != n)
    throw DimensionError("cg_solve: rhs length " + std::to_string(b.size()) +
                         " does not match operator dimension " + std::to_string(n));
  if (opts.max_iter == 0) opts.max_iter = std::max<std::size_t>(10 * n, 1);
  opts.validate();
  if (x0 && static_cast<Index>(x0->size()) != n)
    throw DimensionError("cg_solve: initial guess has wrong length");

  const double bnorm = b.norm();
  if (!std::isfinite(bnorm)) throw Error("cg_solve: NaN or Inf in right-hand side");
  CgResult out;
  if (bnorm == 0.0) {
    out.x = Vector::Zero(b.size());
    return out;
  }

  Vector precond;
  if constexpr (HasDiagonal<Op>) {
    if (opts.jacobi) {
      precond = op.diagonal();
      for (Eigen::Index i = 0; i < precond.size(); ++i)
        precond(i) = precond(i) > 0.0 ? 1.0 / precond(i) : 1.0;
    }
  }
  auto apply_precond = [&](const Vector& r) -> Vector {
    return precond.size() ? Vector(precond.cwiseProduct(r)) : r;
  };

  Vector x = x0 ? *x0 : Vector::Zero(b.size());
  Vector ax(b.size());
  Vector ap(b.size());
  std::size_t it = 0;
  double rel = 0.0;
  // Outer loop restarts from the true residual whenever the recursive one
  // has drifted below tol while the true one has not.
  for (;;) {
    op.apply(x, ax);
    Vector r = b - ax;
    rel = r.norm() / bnorm;
    if (!std::isfinite(rel)) throw Error("cg_solve: NaN detected at iteration " + std::to_string(it));
    if (rel <= opts.tol || it >= opts.max_iter) break;
    Vector z = apply_precond(r);
    Vector p = z;
    double rz = r.dot(z);
    bool breakdown = false;
    while (it < opts.max_iter) {
      op.apply(p, ap);
      const double pap = p.dot(ap);
      if (!std::isfinite(pap))
        throw Error("cg_solve: NaN detected at iteration " + std::to_string(it));
      if (pap <= 0.0) {  // not positive definite along p
        breakdown = true;
        break;
      }
      const double step = rz / pap;
      x += step * p;
      r -= step * ap;
      ++it;
      if (r.norm() / bnorm <= opts.tol) break;
      z = apply_precond(r);
      const double rz_next = r.dot(z);
      p = z + (rz_next / rz) * p;
      rz = rz_next;
    }
    if (breakdown) {
      op.apply(x, ax);
      rel = (b - ax).norm() / bnorm;
      break;
    }
  }

  out.residual = rel;
  out.iterations = it;
  out.x = std::move(x);
  if (!(out.residual <= opts.tol))
    throw ConvergenceError("cg_solve: no convergence", out.residual, it);
  return out;
}

}  // namespace amc::linalg
