#include "glrr/clustering.hpp"
#include "glrr/error.hpp"
#include "glrr/evaluation.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

namespace glrr {
namespace {

Eigen::MatrixXd two_blocks() {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(10, 10);
  w.topLeftCorner(5, 5).setOnes();
  w.bottomRightCorner(5, 5).setOnes();
  return w;
}

// Noisy block affinity with `k` groups of `size`.
Eigen::MatrixXd noisy_blocks(int k, int size, std::mt19937_64& rng) {
  const int n = k * size;
  std::uniform_real_distribution<double> u(0.0, 0.1);
  Eigen::MatrixXd w(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = (i / size == j / size ? 1.0 : 0.0) + u(rng);
      w(i, j) = w(j, i) = v;
    }
  }
  return w;
}

TEST(Affinity, Examples) {
  Eigen::MatrixXd z(2, 2);
  z << 0, -1, 2, 0;
  Eigen::MatrixXd expect(2, 2);
  expect << 0, 3, 3, 0;
  EXPECT_EQ(affinity(z), expect);
  EXPECT_EQ(affinity(Eigen::MatrixXd::Zero(3, 3)), Eigen::MatrixXd::Zero(3, 3));

  std::mt19937_64 rng(50);
  const Eigen::MatrixXd s = testing::random_psd(5, 2.0, rng);
  EXPECT_LE((affinity(s) - 2.0 * s.cwiseAbs()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SpectralCluster, SeparatesDisconnectedBlocks) {
  const auto labels = spectral_cluster(two_blocks(), 2, 0);
  ASSERT_EQ(labels.size(), 10u);
  for (int i = 1; i < 5; ++i) EXPECT_EQ(labels.labels[i], labels.labels[0]);
  for (int i = 6; i < 10; ++i) EXPECT_EQ(labels.labels[i], labels.labels[5]);
  EXPECT_NE(labels.labels[0], labels.labels[5]);
}

TEST(SpectralCluster, PermutingInputPermutesLabels) {
  std::mt19937_64 rng(51);
  const Eigen::MatrixXd w = noisy_blocks(3, 6, rng);
  std::vector<int> perm(18);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXd wp(18, 18);
  for (int i = 0; i < 18; ++i) {
    for (int j = 0; j < 18; ++j) wp(i, j) = w(perm[i], perm[j]);
  }
  const auto a = spectral_cluster(w, 3, 9);
  const auto b = spectral_cluster(wp, 3, 9);
  std::vector<int> back(18);
  for (int i = 0; i < 18; ++i) back[static_cast<std::size_t>(perm[i])] = b.labels[i];
  EXPECT_EQ(accuracy(a, make_labels(back, 3)).accuracy, 1.0);
}

TEST(SpectralCluster, ScaleInvariant) {
  std::mt19937_64 rng(52);
  const Eigen::MatrixXd w = noisy_blocks(4, 5, rng);
  const auto a = spectral_cluster(w, 4, 3);
  const auto b = spectral_cluster(37.5 * w, 4, 3);
  EXPECT_EQ(accuracy(a, b).accuracy, 1.0);
}

TEST(SpectralCluster, KEqualsNGivesSingletons) {
  std::mt19937_64 rng(53);
  const Eigen::MatrixXd w = noisy_blocks(2, 4, rng);
  const auto labels = spectral_cluster(w, 8, 1);
  EXPECT_EQ(std::set<int>(labels.labels.begin(), labels.labels.end()).size(), 8u);
}

TEST(SpectralCluster, Deterministic) {
  std::mt19937_64 rng(54);
  const Eigen::MatrixXd w = noisy_blocks(5, 7, rng);
  EXPECT_EQ(spectral_cluster(w, 5, 11, 20).labels, spectral_cluster(w, 5, 11, 20).labels);
}

TEST(SpectralCluster, IsolatedVertexStaysFinite) {
  Eigen::MatrixXd w = two_blocks();
  w.row(9).setZero();
  w.col(9).setZero();
  const auto labels = spectral_cluster(w, 3, 0);
  EXPECT_EQ(labels.size(), 10u);
  for (int l : labels.labels) {
    EXPECT_GE(l, 0);
    EXPECT_LT(l, 3);
  }
}

TEST(SpectralCluster, RejectsBadK) {
  EXPECT_THROW(spectral_cluster(two_blocks(), 11, 0), ParameterError);
  EXPECT_THROW(spectral_cluster(two_blocks(), 0, 0), ParameterError);
}

TEST(KMeans, SeparatedPoints) {
  Eigen::MatrixXd pts(6, 2);
  pts << 0, 0, 0.1, 0, 0, 0.1, 10, 10, 10.1, 10, 10, 10.1;
  const auto r = kmeans_once(pts, 2, 5);
  EXPECT_EQ(r.labels[0], r.labels[1]);
  EXPECT_EQ(r.labels[0], r.labels[2]);
  EXPECT_EQ(r.labels[3], r.labels[4]);
  EXPECT_NE(r.labels[0], r.labels[3]);
  // Each triangle has centroid offset (1/30, 1/30) and sum of squares 12/900.
  EXPECT_NEAR(r.inertia, 24.0 / 900.0, 1e-12);
}

TEST(MakeLabels, Validation) {
  EXPECT_THROW(make_labels({0, 3}, 3), InputError);
  EXPECT_THROW(make_labels({-1, 0}), InputError);
  EXPECT_EQ(make_labels({0, 4, 2}).k, 5);
}

}  // namespace
}  // namespace glrr
