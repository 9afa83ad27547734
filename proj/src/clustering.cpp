#include "glrr/clustering.hpp"

#include "glrr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace glrr {

ClusterLabels make_labels(std::vector<int> labels, int k) {
  if (k < 1) throw InputError("cluster count must be positive");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= k) {
      throw InputError("label " + std::to_string(labels[i]) + " at index " + std::to_string(i) +
                       " is outside [0, " + std::to_string(k) + ")");
    }
  }
  return ClusterLabels{std::move(labels), k};
}

ClusterLabels make_labels(std::vector<int> labels) {
  int k = 0;
  for (int l : labels) {
    if (l < 0) throw InputError("negative label " + std::to_string(l));
    k = std::max(k, l + 1);
  }
  return make_labels(std::move(labels), std::max(k, 1));
}

Eigen::MatrixXd affinity(const Eigen::MatrixXd& z) {
  if (z.rows() != z.cols()) throw InputError("coefficient matrix must be square");
  if (!z.allFinite()) throw InputError("coefficient matrix has non-finite entries");
  return z.cwiseAbs() + z.transpose().cwiseAbs();
}

namespace {

double sq_dist(const Eigen::MatrixXd& a, Eigen::Index i, const Eigen::MatrixXd& b,
               Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

Eigen::MatrixXd kmeanspp_seed(const Eigen::MatrixXd& x, int k, std::mt19937_64& rng) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd centers(k, x.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  centers.row(0) = x.row(pick(rng));
  Eigen::VectorXd d2(n);
  for (Eigen::Index i = 0; i < n; ++i) d2(i) = sq_dist(x, i, centers, 0);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      double target = unit(rng) * total;
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        target -= d2(i);
        if (target < 0.0 && d2(i) > 0.0) {
          chosen = i;
          break;
        }
      }
      // Guard against landing on an already covered point through round-off.
      while (d2(chosen) <= 0.0 && chosen > 0) --chosen;
    } else {
      chosen = pick(rng);
    }
    centers.row(c) = x.row(chosen);
    for (Eigen::Index i = 0; i < n; ++i) d2(i) = std::min(d2(i), sq_dist(x, i, centers, c));
  }
  return centers;
}

}  // namespace

KMeansResult kmeans_once(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                         int max_iters) {
  const Eigen::Index n = points.rows();
  if (k < 1 || k > n) throw ParameterError("k-means needs 1 <= k <= N");
  std::mt19937_64 rng(seed);
  KMeansResult res;
  res.centers = kmeanspp_seed(points, k, rng);
  res.labels.assign(static_cast<std::size_t>(n), -1);

  for (int it = 0; it < max_iters; ++it) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = sq_dist(points, i, res.centers, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (res.labels[i] != best) {
        res.labels[i] = best;
        changed = true;
      }
    }
    if (!changed) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(res.labels[i]) += points.row(i);
      ++counts[res.labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        res.centers.row(c) = sums.row(c) / counts[c];
      } else {
        // Empty cluster: move it to the point farthest from its center.
        Eigen::Index far = 0;
        double far_d = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double d = sq_dist(points, i, res.centers, res.labels[i]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        res.centers.row(c) = points.row(far);
      }
    }
  }

  res.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) res.inertia += sq_dist(points, i, res.centers, res.labels[i]);
  return res;
}

ClusterLabels spectral_cluster(const Eigen::MatrixXd& w, int k, std::uint64_t seed,
                               int restarts) {
  const Eigen::Index n = w.rows();
  if (w.cols() != n) throw InputError("affinity matrix must be square");
  if (k < 1 || k > n) {
    throw ParameterError("cluster count k=" + std::to_string(k) + " must lie in [1, N=" +
                         std::to_string(n) + "]");
  }
  if (restarts < 1) throw ParameterError("k-means restarts must be positive");
  if (!w.allFinite() || (w.array() < 0.0).any()) {
    throw InputError("affinity matrix must be finite and non-negative");
  }

  const Eigen::VectorXd inv_sqrt_deg =
      w.rowwise().sum().cwiseMax(kDegreeFloor).cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd normalized = inv_sqrt_deg.asDiagonal() * w * inv_sqrt_deg.asDiagonal();
  normalized = 0.5 * (normalized + normalized.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normalized);
  if (es.info() != Eigen::Success) throw NumericalError("affinity eigendecomposition failed");
  Eigen::MatrixXd embedding = es.eigenvectors().rightCols(k).rowwise().reverse();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = embedding.row(i).norm();
    if (norm > 0.0) embedding.row(i) /= norm;
  }

  std::vector<KMeansResult> runs(static_cast<std::size_t>(restarts));
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < restarts; ++r) {
    runs[r] = kmeans_once(embedding, k, seed + static_cast<std::uint64_t>(r));
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].inertia < runs[best].inertia) best = r;
  }
  return ClusterLabels{std::move(runs[best].labels), k};
}

}  // namespace glrr
