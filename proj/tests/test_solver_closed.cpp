#include "glrr/error.hpp"
#include "glrr/solver_closed.hpp"
#include "oracles/prox_gradient.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

namespace glrr {
namespace {

Eigen::Index numeric_rank(const Eigen::MatrixXd& z) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(z);
  return (svd.singularValues().array() > 1e-10).count();
}

TEST(SolveFrobenius, DiagonalExample) {
  GramMatrix k{Eigen::Vector2d(3, 1).asDiagonal()};
  const auto sol = solve_frobenius(k, 2.0);
  // 3 (d - 1)^2 + 2 |d| is minimized at d = 2/3; (d - 1)^2 + 2 |d| at d = 0.
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(2, 2);
  expect(0, 0) = 2.0 / 3.0;
  EXPECT_LE((sol.z - expect).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(sol.rank, 1);

  const Eigen::MatrixXd oracle = oracle::prox_gradient_lrr(k.values, 2.0);
  EXPECT_LE((sol.z - oracle).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(SolveFrobenius, ZeroLambdaGivesIdentity) {
  std::mt19937_64 rng(20);
  Eigen::MatrixXd q = testing::orthonormal(6, 6, rng);
  Eigen::VectorXd ev(6);
  ev << 5, 4, 3, 2, 1, 0.5;
  GramMatrix k{q * ev.asDiagonal() * q.transpose()};
  k.values = 0.5 * (k.values + k.values.transpose()).eval();
  EXPECT_LE((solve_frobenius(k, 0.0).z - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff(),
            1e-10);
}

TEST(SolveFrobenius, LargeLambdaGivesZero) {
  std::mt19937_64 rng(21);
  GramMatrix k{testing::random_psd(8, 5.0, rng)};
  const double smax = symmetric_eigen(k.values).eigvals(0);
  const auto sol = solve_frobenius(k, 2.0 * smax);
  EXPECT_EQ(sol.z.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(sol.rank, 0);
}

TEST(SolveFrobenius, RejectsNegativeLambda) {
  GramMatrix k{Eigen::MatrixXd::Identity(2, 2)};
  EXPECT_THROW(solve_frobenius(k, -1.0), ParameterError);
}

TEST(SolveFrobenius, SymmetricPsdAndCommutesWithK) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 20; ++t) {
    GramMatrix k{testing::random_psd(12, 5.0, rng)};
    const auto sol = solve_frobenius(k, 1.3);
    EXPECT_LE((sol.z - sol.z.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sol.z);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8 * sol.z.norm());
    EXPECT_LE((sol.z * k.values - k.values * sol.z).norm(), 1e-8 * k.values.norm());
  }
}

TEST(SolveFrobenius, RankCountsEigenvaluesAboveLambda) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 20; ++t) {
    GramMatrix k{testing::random_psd(12, 5.0, rng)};
    const double lambda = 0.25 * (t % 16);
    const auto sol = solve_frobenius(k, lambda);
    const auto ev = symmetric_eigen(k.values).eigvals;
    const auto expected = (ev.array() > 0.5 * lambda).count();
    EXPECT_EQ(numeric_rank(sol.z), expected);
    EXPECT_EQ(sol.rank, expected);
  }
}

TEST(SolveFrobenius, RankNonIncreasingInLambda) {
  std::mt19937_64 rng(24);
  GramMatrix k{testing::random_psd(15, 5.0, rng)};
  const auto eig = symmetric_eigen(k.values);
  Eigen::Index prev = 15;
  for (double lambda = 0.0; lambda <= 11.0; lambda += 0.1) {
    const auto r = numeric_rank(solve_frobenius(eig, lambda).z);
    EXPECT_LE(r, prev);
    prev = r;
  }
}

TEST(SolveFrobenius, MatchesProximalGradientOracle) {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 5; ++t) {
    GramMatrix k{testing::random_psd(8, 5.0, rng)};
    const double lambda = 0.5 + t;
    const auto sol = solve_frobenius(k, lambda);
    const Eigen::MatrixXd oracle = oracle::prox_gradient_lrr(k.values, lambda);
    const Eigen::MatrixXd root = oracle::clamped_sqrt(k.values);
    EXPECT_LE(std::abs(frobenius_objective(sol.z, root, lambda) -
                       oracle::lrr_objective(oracle, root, lambda)),
              1e-6);
    EXPECT_LE((sol.z - oracle).cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(SolveFrobenius, ClampsIndefiniteKernel) {
  GramMatrix k{Eigen::Vector3d(4, 1, -0.5).asDiagonal()};
  const auto sol = solve_frobenius(k, 0.5);
  EXPECT_NEAR(sol.clamped_mass, 0.5, 1e-15);
  EXPECT_NEAR(sol.z(0, 0), 1.0 - 0.25 / 4.0, 1e-14);
  EXPECT_NEAR(sol.z(1, 1), 0.75, 1e-14);
  EXPECT_NEAR(sol.z(2, 2), 0.0, 1e-14);
}

TEST(SolveFrobenius, NumericallyZeroEigenvaluesDoNotBlowUp) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(3, 3);
  k(0, 0) = 2.0;
  k(1, 1) = 1e-14;
  const auto sol = solve_frobenius(GramMatrix{k}, 0.0);
  EXPECT_NEAR(sol.z(0, 0), 1.0, 1e-14);
  EXPECT_EQ(sol.z(1, 1), 0.0);
  EXPECT_TRUE(sol.z.allFinite());
}

}  // namespace
}  // namespace glrr
