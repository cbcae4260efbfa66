#include <gtest/gtest.h>

#include <sstream>

#include "amc/graphs/laplacian.hpp"
#include "amc/linalg.hpp"
#include "test_util.hpp"

using namespace amc;
using namespace amc::linalg;
using amc::testing::random_spd;
using amc::testing::random_symmetric;

TEST(Spmv, IdentityReturnsInput) {
  const Vector x = (Vector(3) << 1, 2, 3).finished();
  EXPECT_EQ(spmv(SparseSym::identity(3), x), x);
}

TEST(Spmv, PathLaplacianAnnihilatesConstants) {
  const auto g = graphs::path_graph(3);
  const Vector y = spmv(g.laplacian(), Vector::Ones(3));
  EXPECT_EQ(y, Vector::Zero(3));
}

TEST(Spmv, MatchesDenseMultiply) {
  std::mt19937_64 rng(1);
  const DenseMatrix a = random_symmetric(8, rng);
  const SparseSym s = SparseSym::from_dense(a);
  const Vector x = amc::testing::random_vector(8, rng);
  EXPECT_LE((spmv(s, x) - a * x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Spmv, DimensionMismatchThrows) {
  EXPECT_THROW(spmv(SparseSym::identity(3), Vector::Ones(2)), DimensionError);
}

TEST(SparseSym, RejectsAsymmetryAndDuplicates) {
  EXPECT_THROW(SparseSym::from_triplets(2, {{0, 1, 1.0}}), InvalidArgument);
  EXPECT_THROW(SparseSym::from_triplets(2, {{0, 1, 1.0}, {1, 0, 2.0}}), InvalidArgument);
  EXPECT_THROW(SparseSym::from_triplets(2, {{0, 0, 1.0}, {0, 0, 1.0}}), InvalidArgument);
  EXPECT_NO_THROW(SparseSym::from_triplets(2, {{0, 1, 1.0}, {1, 0, 1.0 + 1e-14}}));
}

TEST(SparseSym, EdgeListRoundTrip) {
  std::mt19937_64 rng(2);
  const SparseSym s = SparseSym::from_dense(random_symmetric(7, rng, 0.4));
  std::stringstream buf;
  write_edge_list(buf, s);
  const SparseSym back = read_edge_list(buf);
  EXPECT_EQ(back.dim(), s.dim());
  EXPECT_EQ(back.to_dense(), s.to_dense());
}

TEST(SparseSym, EdgeListParseErrors) {
  std::stringstream lower("1 0 2.0\n");
  EXPECT_THROW(read_edge_list(lower), ParseError);
  std::stringstream junk("0 1 x\n");
  EXPECT_THROW(read_edge_list(junk), ParseError);
  std::stringstream too_big("# n=2\n0 3 1.0\n");
  EXPECT_THROW(read_edge_list(too_big), ParseError);
  std::stringstream isolated("# n=4\n0 1 1.0\n");
  EXPECT_EQ(read_edge_list(isolated).dim(), 4u);
}

TEST(CgSolve, IdentityReturnsRhs) {
  const Vector b = (Vector(4) << 1, -2, 3, 0.5).finished();
  const auto res = cg_solve(SparseSym::identity(4), b);
  EXPECT_LE((res.x - b).norm(), 1e-14);
}

TEST(CgSolve, ZeroRhsGivesZero) {
  const auto res = cg_solve(SparseSym::identity(4), Vector::Zero(4));
  EXPECT_EQ(res.x, Vector::Zero(4));
  EXPECT_EQ(res.iterations, 0u);
}

TEST(CgSolve, MatchesDenseSolve) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix a = random_spd(12, rng);
    const Vector b = amc::testing::random_vector(12, rng);
    const Vector ref = a.lu().solve(b);
    const auto res = cg_solve(SparseSym::from_dense(a), b);
    EXPECT_LE((res.x - ref).norm() / ref.norm(), 1e-8);
    EXPECT_LE(res.residual, 1e-8);
  }
}

TEST(CgSolve, JacobiAndWarmStart) {
  std::mt19937_64 rng(4);
  const DenseMatrix a = random_spd(20, rng);
  const Vector b = amc::testing::random_vector(20, rng);
  const Vector ref = a.lu().solve(b);
  auto opts = cg_defaults();
  opts.jacobi = true;
  EXPECT_LE((cg_solve(SparseSym::from_dense(a), b, opts).x - ref).norm() / ref.norm(), 1e-8);
  const auto warm = cg_solve(SparseSym::from_dense(a), b, cg_defaults(), Vector(ref));
  EXPECT_LE(warm.iterations, 1u);
}

TEST(CgSolve, NonConvergenceReportsResidual) {
  // Singular, inconsistent system: no solution exists.
  const SparseSym a = graphs::path_graph(4).laplacian();
  auto opts = cg_defaults();
  opts.max_iter = 5;
  try {
    cg_solve(a, Vector::Ones(4), opts);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.residual(), 1e-8);
  }
}

TEST(CgSolve, DimensionMismatchThrows) {
  EXPECT_THROW(cg_solve(SparseSym::identity(3), Vector::Ones(4)), DimensionError);
}

TEST(Lobpcg, IdentityHasUnitEigenvalue) {
  const auto res = lobpcg_smallest(SparseSym::identity(5), random_unit_vector(5, 7));
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.pair.value, 1.0, 1e-12);
  EXPECT_NEAR(res.pair.vec.norm(), 1.0, 1e-10);
}

TEST(Lobpcg, PathLaplacianNullspace) {
  const auto g = graphs::path_graph(5);
  auto opts = lobpcg_defaults();
  opts.tol = 1e-10;
  const auto res = lobpcg_smallest(g.laplacian(), random_unit_vector(5, 11), opts);
  ASSERT_TRUE(res.converged);
  EXPECT_NEAR(res.pair.value, 0.0, 1e-10);
  const Vector c = Vector::Constant(5, 1.0 / std::sqrt(5.0));
  EXPECT_LE(std::min((res.pair.vec - c).norm(), (res.pair.vec + c).norm()), 1e-8);
}

TEST(Lobpcg, MatchesDenseEigOnRandomSpd) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix a = random_spd(20, rng);
    const double ref = dense_lambda_min(a);
    const auto res = lobpcg_smallest(DenseOperator(a), random_unit_vector(20, rng));
    EXPECT_TRUE(res.converged);
    EXPECT_LE(std::abs(res.pair.value - ref), 1e-6);
    Vector av;
    DenseOperator(a).apply(res.pair.vec, av);
    EXPECT_LE((av - res.pair.value * res.pair.vec).norm(), 1e-6);
    EXPECT_NEAR(res.pair.vec.norm(), 1.0, 1e-10);
  }
}

TEST(Lobpcg, WarmStartFromEigenvectorConvergesImmediately) {
  std::mt19937_64 rng(6);
  const DenseMatrix a = random_spd(15, rng);
  const auto pairs = dense_sym_eig(a);
  const auto res = lobpcg_smallest(DenseOperator(a), pairs[0].vec);
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.iterations, 0u);
}

TEST(Lobpcg, ConstantStartOnLaplacianDoesNotBreakDown) {
  // Constant start is an exact eigenvector of L but not of L + e_0 e_0^T.
  auto lap = graphs::path_graph(6).laplacian().to_dense();
  lap(0, 0) += 1.0;
  auto opts = lobpcg_defaults();
  opts.tol = 1e-10;
  const auto res = lobpcg_smallest(DenseOperator(lap), Vector::Ones(6), opts);
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.pair.value, dense_lambda_min(lap), 1e-9);
}

TEST(Lobpcg, JacobiPreconditionerAgrees) {
  std::mt19937_64 rng(8);
  const DenseMatrix a = random_spd(30, rng);
  auto opts = lobpcg_defaults();
  opts.jacobi = true;
  const auto res = lobpcg_smallest(SparseSym::from_dense(a), random_unit_vector(30, rng), opts);
  EXPECT_TRUE(res.converged);
  EXPECT_LE(std::abs(res.pair.value - dense_lambda_min(a)), 1e-6);
}

TEST(Lobpcg, ErrorsAndNonConvergence) {
  EXPECT_THROW(lobpcg_smallest(SparseSym::identity(3), Vector::Zero(3)), InvalidArgument);
  EXPECT_THROW(lobpcg_smallest(SparseSym::identity(3), Vector::Ones(4)), DimensionError);
  std::mt19937_64 rng(9);
  const DenseMatrix a = random_spd(40, rng);
  auto opts = lobpcg_defaults();
  opts.max_iter = 1;
  opts.tol = 1e-14;
  const auto res = lobpcg_smallest(DenseOperator(a), random_unit_vector(40, rng), opts);
  EXPECT_FALSE(res.converged);
  EXPECT_EQ(res.iterations, 1u);
  EXPECT_NEAR(res.pair.vec.norm(), 1.0, 1e-10);
}

TEST(Lobpcg, DeterministicForSeed) {
  std::mt19937_64 rng(10);
  const DenseMatrix a = random_spd(25, rng);
  const auto r1 = lobpcg_smallest(SparseSym::from_dense(a), random_unit_vector(25, 99));
  const auto r2 = lobpcg_smallest(SparseSym::from_dense(a), random_unit_vector(25, 99));
  EXPECT_EQ(r1.pair.value, r2.pair.value);
  EXPECT_EQ(r1.pair.vec, r2.pair.vec);
}

TEST(DenseSymEig, DiagonalMatrix) {
  DenseMatrix a = DenseMatrix::Zero(3, 3);
  a.diagonal() << 3, 1, 2;
  const auto pairs = dense_sym_eig(a);
  EXPECT_DOUBLE_EQ(pairs[0].value, 1.0);
  EXPECT_DOUBLE_EQ(pairs[1].value, 2.0);
  EXPECT_DOUBLE_EQ(pairs[2].value, 3.0);
}

TEST(DenseSymEig, TwoByTwoByHand) {
  // det([[2-l, -1], [-1, 2-l]]) = (2-l)^2 - 1 = 0 -> l = 1, 3.
  const DenseMatrix a = (DenseMatrix(2, 2) << 2, -1, -1, 2).finished();
  const auto pairs = dense_sym_eig(a);
  EXPECT_NEAR(pairs[0].value, 1.0, 1e-14);
  EXPECT_NEAR(pairs[1].value, 3.0, 1e-14);
}

TEST(DenseSymEig, ReconstructionAndOrthonormality) {
  std::mt19937_64 rng(12);
  const DenseMatrix a = random_symmetric(10, rng, 1.0);
  const auto pairs = dense_sym_eig(a);
  DenseMatrix v(10, 10);
  Vector lam(10);
  for (int k = 0; k < 10; ++k) {
    v.col(k) = pairs[std::size_t(k)].vec;
    lam(k) = pairs[std::size_t(k)].value;
    if (k) {
      EXPECT_LE(pairs[std::size_t(k - 1)].value, lam(k));
    }
  }
  EXPECT_LE((a - v * lam.asDiagonal() * v.transpose()).norm(), 1e-9);
  EXPECT_LE((v.transpose() * v - DenseMatrix::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(DenseSymEig, Errors) {
  EXPECT_THROW(dense_sym_eig(DenseMatrix::Identity(6, 6), 5), DimensionError);
  DenseMatrix a = DenseMatrix::Identity(3, 3);
  a(0, 1) = 1e-6;
  EXPECT_THROW(dense_sym_eig(a), InvalidArgument);
}

TEST(Gershgorin, DiagonalDiscs) {
  const auto discs = gershgorin_bounds(SparseSym::diagonal((Vector(2) << 1, 2).finished()));
  ASSERT_EQ(discs.size(), 2u);
  EXPECT_EQ(discs[0].center, 1.0);
  EXPECT_EQ(discs[0].radius, 0.0);
  EXPECT_EQ(discs[1].center, 2.0);
  EXPECT_EQ(gershgorin_lower_bound(discs), 1.0);
}

TEST(Gershgorin, SelfLoopsMoveLeftEndsToOne) {
  const auto g = graphs::path_graph(5);
  Vector shift = Vector::Zero(5);
  shift(1) = 1.0;
  shift(3) = 1.0;
  const SparseSym lt = g.laplacian().combine(1.0, SparseSym::diagonal(shift), 1.0);
  const auto discs = gershgorin_bounds(lt);
  for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(discs[std::size_t(i)].left, (i == 1 || i == 3) ? 1.0 : 0.0);
}

TEST(Gershgorin, SoundOnRandomMatrices) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + trial % 20;
    const DenseMatrix a = random_symmetric(n, rng);
    const auto discs = gershgorin_bounds(SparseSym::from_dense(a));
    for (const auto& d : discs) {
      EXPECT_GE(d.radius, 0.0);
      EXPECT_LE(d.left, d.right);
    }
    EXPECT_GE(dense_lambda_min(a), gershgorin_lower_bound(discs) - 1e-10);
  }
}
