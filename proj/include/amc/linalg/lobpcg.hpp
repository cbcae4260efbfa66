#pragma once

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>

#include "amc/linalg/types.hpp"

namespace amc::linalg {

struct LobpcgResult {
  EigenPair pair;
  std::size_t iterations = 0;  // Rayleigh-Ritz steps performed
  double residual = 0.0;       // ||A v - lambda v||, recomputed from the returned pair
  bool converged = false;
};

namespace detail {

// Fixes the sign so that the first entry of largest magnitude is positive.
inline void canonical_sign(Vector& v) {
  Eigen::Index arg = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > best + 1e-14) {
      best = std::abs(v(i));
      arg = i;
    }
  if (v.size() && v(arg) < 0.0) v = -v;
}

}  // namespace detail

/// Smallest eigenpair of a symmetric operator by block-size-one LOBPCG.
///
/// x0 seeds the iteration (warm start). Each step runs Rayleigh-Ritz on the
/// orthonormalized span of {x, w, p}, w = (preconditioned) residual and p the
/// previous search direction; when p becomes collinear with {x, w} it is
/// dropped and the step is a plain steepest-descent step. A run that hits
/// max_iter returns its best iterate with converged = false.
template <LinearOperator Op>
LobpcgResult lobpcg_smallest(const Op& op, const Vector& x0, SolverOptions opts = lobpcg_defaults()) {
  opts.validate();
  const Index n = op.dim();
  if (static_cast<Index>(x0.size()) != n)
    throw DimensionError("lobpcg_smallest: initial vector has length " + std::to_string(x0.size()) +
                         ", operator dimension is " + std::to_string(n));
  const double x0norm = x0.norm();
  if (!(x0norm > 0.0)) throw InvalidArgument("lobpcg_smallest: zero initial vector");
  if (!std::isfinite(x0norm)) throw InvalidArgument("lobpcg_smallest: non-finite initial vector");

  Vector inv_diag;
  if constexpr (HasDiagonal<Op>) {
    if (opts.jacobi) {
      inv_diag = op.diagonal();
      for (Eigen::Index i = 0; i < inv_diag.size(); ++i)
        inv_diag(i) = std::abs(inv_diag(i)) > 1e-300 ? 1.0 / std::abs(inv_diag(i)) : 1.0;
    }
  }

  LobpcgResult out;
  Vector x = x0 / x0norm;
  Vector ax(x.size());
  op.apply(x, ax);
  double lambda = x.dot(ax);

  if (n == 1) {
    out.pair = {lambda, x};
    detail::canonical_sign(out.pair.vec);
    out.converged = true;
    return out;
  }

  Vector p, ap;  // previous direction and its image, empty on the first step
  Vector r(x.size()), w(x.size()), aw(x.size());

  for (std::size_t it = 0;; ++it) {
    r = ax - lambda * x;
    const double res = r.norm();
    if (!std::isfinite(res)) throw Error("lobpcg_smallest: NaN detected at iteration " + std::to_string(it));
    out.iterations = it;
    out.residual = res;
    if (res <= opts.tol) {
      out.converged = true;
      break;
    }
    if (it >= opts.max_iter) break;

    w = inv_diag.size() ? Vector(inv_diag.cwiseProduct(r)) : r;
    op.apply(w, aw);

    // Orthonormal basis of span{x, w, p} carried together with its image.
    std::array<Vector, 3> q;
    std::array<Vector, 3> aq;
    int k = 0;
    q[0] = x;
    aq[0] = ax;
    k = 1;
    auto push = [&](Vector v, Vector av) {
      const double start = v.norm();
      if (!(start > 0.0)) return;
      for (int pass = 0; pass < 2; ++pass)
        for (int j = 0; j < k; ++j) {
          const double c = q[j].dot(v);
          v -= c * q[j];
          av -= c * aq[j];
        }
      const double nv = v.norm();
      if (nv <= 1e-10 * start) return;  // collinear with the current basis
      q[k] = v / nv;
      aq[k] = av / nv;
      ++k;
    };
    push(w, aw);
    if (p.size()) push(p, ap);

    if (k == 1) {  // residual collapsed onto x; nothing left to improve
      out.converged = res <= opts.tol;
      break;
    }

    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    for (int a = 0; a < k; ++a)
      for (int b = a; b < k; ++b) {
        const double v = 0.5 * (q[a].dot(aq[b]) + q[b].dot(aq[a]));
        h(a, b) = v;
        h(b, a) = v;
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rr(h.topLeftCorner(k, k));
    const Eigen::VectorXd c = rr.eigenvectors().col(0);

    Vector xn = c(0) * q[0];
    Vector axn = c(0) * aq[0];
    Vector pn = Vector::Zero(x.size());
    Vector apn = Vector::Zero(x.size());
    for (int j = 1; j < k; ++j) {
      pn += c(j) * q[j];
      apn += c(j) * aq[j];
    }
    xn += pn;
    axn += apn;
    const double nx = xn.norm();
    x = xn / nx;
    op.apply(x, ax);  // fresh image keeps the residual honest
    lambda = x.dot(ax);
    p = std::move(pn);
    ap = std::move(apn);
    out.iterations = it + 1;
  }

  out.pair = {lambda, x};
  detail::canonical_sign(out.pair.vec);
  return out;
}

}  // namespace amc::linalg
