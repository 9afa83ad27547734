#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace glrr {

struct ClusterLabels {
  std::vector<int> labels;
  int k = 0;

  std::size_t size() const { return labels.size(); }
};

/// Validates that every label lies in [0, k). Throws InputError.
ClusterLabels make_labels(std::vector<int> labels, int k);

/// Builds labels with k = max label + 1. Throws InputError on negatives.
ClusterLabels make_labels(std::vector<int> labels);

/// |Z| + |Z^T|.
Eigen::MatrixXd affinity(const Eigen::MatrixXd& z);

inline constexpr double kDegreeFloor = 1e-12;
inline constexpr int kDefaultRestarts = 50;

/// Normalized spectral clustering: top-k eigenvectors of D^{-1/2} W D^{-1/2},
/// rows scaled to unit length, then k-means++ with `restarts` restarts. The
/// lowest within-cluster sum of squares wins; ties go to the lower restart.
/// Deterministic for a fixed seed. Throws ParameterError if k > N or k < 1.
ClusterLabels spectral_cluster(const Eigen::MatrixXd& w, int k, std::uint64_t seed,
                               int restarts = kDefaultRestarts);

struct KMeansResult {
  std::vector<int> labels;
  Eigen::MatrixXd centers;
  double inertia = 0.0;
};

/// Lloyd iterations from a k-means++ seeding; one restart.
KMeansResult kmeans_once(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                         int max_iters = 300);

}  // namespace glrr
