#include <gtest/gtest.h>

#include <sstream>

#include "amc/completion.hpp"
#include "amc/graphs.hpp"
#include "amc/linalg/dense.hpp"
#include "test_util.hpp"

using namespace amc;
using namespace amc::completion;
using graphs::path_graph;
using amc::testing::random_connected_graph;

namespace {

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

DenseMatrix eye(Index n) { return DenseMatrix::Identity(Eigen::Index(n), Eigen::Index(n)); }

DenseMatrix smooth_dense(const CompletionProblem& p) {
  return p.alpha * kron(eye(p.n()), p.row_graph.laplacian().to_dense()) +
         p.beta * kron(p.col_graph.laplacian().to_dense(), eye(p.m()));
}

DenseMatrix q_dense(const CompletionProblem& p) {
  DenseMatrix q = smooth_dense(p);
  for (Index l : p.omega) q(Eigen::Index(l), Eigen::Index(l)) += 1.0;
  return q;
}

// Objective evaluated in vectorized form.
double oracle_objective(const DenseMatrix& x, const CompletionProblem& p) {
  const Vector v = x.reshaped();
  const Vector y = p.y_omega().reshaped();
  double fit = 0.0;
  for (Index l : p.omega) fit += std::pow(v(Eigen::Index(l)) - y(Eigen::Index(l)), 2);
  return 0.5 * fit + 0.5 * v.dot(smooth_dense(p) * v);
}

// Random problem with observed entries at density `dens` (at least one).
CompletionProblem random_problem(Index m, Index n, double dens, std::mt19937_64& rng, DenseMatrix* truth = nullptr,
                                 DenseMatrix* noise = nullptr, double sigma = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  DenseMatrix x(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  DenseMatrix nz = DenseMatrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x(i) = 1.0 + 4.0 * u(rng);
    nz(i) = sigma * g(rng);
  }
  graphs::RatingMatrix y(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i)
      if (u(rng) < dens || (i == 0 && j == 0))
        y.add(i, j, x(Eigen::Index(i), Eigen::Index(j)) + nz(Eigen::Index(i), Eigen::Index(j)));
  if (truth) *truth = x;
  if (noise) *noise = nz;
  return make_problem(y, random_connected_graph(m, rng), random_connected_graph(n, rng), 0.05 + u(rng),
                      0.05 + u(rng));
}

}  // namespace

TEST(DglrSolve, IdentitySystemReturnsY) {
  DenseMatrix y(2, 3);
  y << 1, 2, 3, 4, 5, 6;
  const auto p = make_problem(graphs::RatingMatrix::from_dense(y), path_graph(2), path_graph(3), 0.0, 0.0);
  const auto r = dglr_solve(p);
  EXPECT_LE((r.x_star - y).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(r.lambda_min_est, 1.0, 1e-6);
}

TEST(DglrSolve, ConstantTruthFromOneSample) {
  graphs::RatingMatrix y(4, 3, {{2, 1, 3.5}});
  const auto p = make_problem(y, path_graph(4), path_graph(3), 0.7, 0.2);
  const auto r = dglr_solve(p);
  EXPECT_LE((r.x_star.array() - 3.5).abs().maxCoeff(), 1e-7);
  EXPECT_LE(r.residual, 1e-8);
}

TEST(DglrSolve, MatchesDenseSolve) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_problem(4, 3, 0.4, rng);
    const Vector ref = q_dense(p).lu().solve(Vector(p.y_omega().reshaped()));
    const auto r = dglr_solve(p);
    EXPECT_LE((Vector(r.x_star.reshaped()) - ref).norm() / ref.norm(), 1e-8);
    EXPECT_NEAR(r.lambda_min_est, linalg::dense_lambda_min(q_dense(p)), 1e-6);
  }
}

TEST(DglrSolve, GradientVanishesAtSolution) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_problem(6, 5, 0.3, rng);
    SolveOptions o;
    const auto r = dglr_solve(p, o);
    EXPECT_LE(dglr_gradient(r.x_star, p).norm(), 10 * o.cg.tol * p.y_omega().norm());
  }
}

TEST(DglrSolve, SingularSystemsAreReported) {
  graphs::RatingMatrix empty(3, 3);
  EXPECT_THROW(dglr_solve(make_problem(empty, path_graph(3), path_graph(3), 0.1, 0.1)), SingularSystemError);
  // Two row components, samples only in the first.
  const auto rows = graphs::laplacian_from_upper_weights(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  graphs::RatingMatrix y(4, 2, {{0, 0, 1.0}});
  try {
    dglr_solve(make_problem(y, rows, path_graph(2), 0.1, 0.1));
    FAIL() << "expected SingularSystemError";
  } catch (const SingularSystemError& e) {
    EXPECT_NE(std::string(e.what()).find("row component 1"), std::string::npos);
  }
}

TEST(DglrSolve, ValidatesProblem) {
  graphs::RatingMatrix y(3, 2, {{0, 0, 1.0}});
  EXPECT_THROW(make_problem(y, path_graph(2), path_graph(2), 0.1, 0.1), DimensionError);
  auto p = make_problem(y, path_graph(3), path_graph(2), 0.1, 0.1);
  p.omega.push_back(4);
  EXPECT_THROW(dglr_solve(p), InvalidArgument);
}

TEST(Objective, TrivialCases) {
  DenseMatrix y(2, 2);
  y << 1, 2, 3, 4;
  const auto p = make_problem(graphs::RatingMatrix::from_dense(y), path_graph(2), path_graph(2), 0.0, 0.0);
  EXPECT_EQ(dglr_objective(y, p), 0.0);
  EXPECT_EQ(dglr_gradient(y, p), DenseMatrix::Zero(2, 2));
  const auto pc = make_problem(graphs::RatingMatrix::from_dense(DenseMatrix::Constant(3, 2, 2.0)), path_graph(3),
                               path_graph(2), 0.4, 0.9);
  EXPECT_NEAR(dglr_objective(DenseMatrix::Constant(3, 2, 2.0), pc), 0.0, 1e-14);
  EXPECT_THROW(dglr_objective(DenseMatrix::Zero(2, 3), pc), DimensionError);
}

TEST(Objective, MatchesVectorizedForm) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_problem(5, 4, 0.5, rng);
    const DenseMatrix x = amc::testing::random_vector(20, rng).reshaped(5, 4);
    EXPECT_NEAR(dglr_objective(x, p), oracle_objective(x, p), 1e-10);
  }
}

TEST(Objective, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(4);
  const double h = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_problem(5, 4, 0.5, rng);
    const DenseMatrix x = amc::testing::random_vector(20, rng).reshaped(5, 4);
    DenseMatrix fd(5, 4);
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      DenseMatrix xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      fd(k) = (oracle_objective(xp, p) - oracle_objective(xm, p)) / (2 * h);
    }
    EXPECT_LE((dglr_gradient(x, p) - fd).norm() / fd.norm(), 1e-5);
  }
}

TEST(ErrorBoundTest, NoiselessConstantCollapses) {
  graphs::RatingMatrix y(3, 3, {{1, 1, 2.0}});
  const auto p = make_problem(y, path_graph(3), path_graph(3), 0.3, 0.3);
  const auto r = dglr_solve(p);
  const DenseMatrix x = DenseMatrix::Constant(3, 3, 2.0);
  const auto b = mse_upper_bound(r.x_star, x, DenseMatrix::Zero(3, 3), p, r.lambda_min_est);
  EXPECT_NEAR(b.rho, 0.0, 1e-14);
  EXPECT_NEAR(b.bound, 0.0, 1e-14);
  EXPECT_LE(b.actual_error, 1e-7);
  EXPECT_THROW(mse_upper_bound(r.x_star, x, x, p, 0.0), InvalidArgument);
}

TEST(ErrorBoundTest, VanishingRegularizationLeavesNoise) {
  std::mt19937_64 rng(5);
  DenseMatrix x, nz;
  auto p = random_problem(4, 4, 2.0, rng, &x, &nz, 0.3);
  p.alpha = p.beta = 1e-12;
  const auto r = dglr_solve(p);
  const auto b = mse_upper_bound(r.x_star, x, nz, p, linalg::dense_lambda_min(q_dense(p)));
  EXPECT_NEAR(b.bound, nz.norm(), 1e-9);
  EXPECT_LE(b.actual_error, b.bound + 1e-9);
}

TEST(ErrorBoundTest, HoldsOnRandomNoisyInstances) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    DenseMatrix x, nz;
    const auto p = random_problem(5, 4, 0.4, rng, &x, &nz, 0.5);
    const auto r = dglr_solve(p);
    const auto b = mse_upper_bound(r.x_star, x, nz, p, linalg::dense_lambda_min(q_dense(p)));
    EXPECT_LE(b.actual_error, b.bound + 1e-9) << "trial " << trial;
  }
}

TEST(ErrorBoundTest, MoreSamplesNeverHurtTheBound) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    DenseMatrix x;
    auto p = random_problem(5, 4, 0.2, rng, &x);
    auto bigger = make_problem(graphs::RatingMatrix::from_dense(x), p.row_graph, p.col_graph, p.alpha, p.beta);
    bigger.omega = p.omega;
    for (Index l = 0; l < 20; ++l)
      if (std::find(p.omega.begin(), p.omega.end(), l) == p.omega.end() && l % 3 == 0) bigger.omega.push_back(l);
    const double lam = linalg::dense_lambda_min(q_dense(p));
    const double lam2 = linalg::dense_lambda_min(q_dense(bigger));
    EXPECT_GE(lam2, lam - 1e-12);
    const auto zero = DenseMatrix::Zero(5, 4);
    EXPECT_LE(mse_upper_bound(x, x, zero, bigger, lam2).bound, mse_upper_bound(x, x, zero, p, lam).bound + 1e-12);
  }
}

TEST(LambdaMaxBoundOnQ, HoldsForCompletionOperators) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_problem(5, 4, 0.5, rng);
    const double bound = 2 * p.alpha * p.row_graph.max_degree() + 2 * p.beta * p.col_graph.max_degree() + 1;
    EXPECT_LE(linalg::dense_lambda_max(q_dense(p)), bound + 1e-12);
  }
}

TEST(Rmse, Examples) {
  std::mt19937_64 rng(9);
  const DenseMatrix t = amc::testing::random_vector(12, rng).reshaped(3, 4);
  const std::vector<Index> idx{0, 3, 7, 11};
  EXPECT_EQ(rmse_eval(t, t, idx), 0.0);
  EXPECT_NEAR(rmse_eval((t.array() - 0.7).matrix(), t, idx), 0.7, 1e-14);
  const DenseMatrix x = amc::testing::random_vector(12, rng).reshaped(3, 4);
  double ss = 0;
  for (Index l : idx) ss += std::pow(x(Eigen::Index(l)) - t(Eigen::Index(l)), 2);
  EXPECT_EQ(rmse_eval(x, t, idx), std::sqrt(ss / 4));
  EXPECT_THROW(rmse_eval(x, t, {}), InvalidArgument);
  graphs::RatingMatrix truth(3, 4, {{0, 0, t(0, 0)}, {2, 3, t(2, 3)}});
  EXPECT_EQ(rmse_eval(t, truth), 0.0);
}

TEST(CompletionIo, ReportAndMatrixRoundTrip) {
  CompletionReport r;
  r.x_star = (DenseMatrix(2, 2) << 1.5, -2, 1.0 / 3.0, 4).finished();
  r.residual = 1e-9;
  r.lambda_min_est = 0.25;
  r.cg_iterations = 7;
  const auto j = report_to_json(r);
  EXPECT_TRUE(j["rho"].is_null());
  const auto back = report_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.residual, 1e-9);
  EXPECT_EQ(back.cg_iterations, 7u);
  EXPECT_TRUE(std::isnan(back.rho));
  std::stringstream buf;
  write_matrix_csv(buf, r.x_star);
  EXPECT_EQ(read_matrix_csv(buf), r.x_star);
  std::stringstream bad("1,2\n3\n");
  EXPECT_THROW(read_matrix_csv(bad), ParseError);
}
