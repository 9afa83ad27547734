#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace glrr {

/// A point on the Grassmann manifold G(p, d), held as a d x p matrix with
/// orthonormal columns. Any orthonormal basis of the same span represents the
/// same point; nothing downstream depends on the particular basis.
class GrassmannPoint {
 public:
  static constexpr double kOrthonormalityTol = 1e-8;

  /// Validates orthonormality (max |B^T B - I| <= 1e-8) and 1 <= p <= d.
  /// Throws DimensionError or InputError.
  explicit GrassmannPoint(Eigen::MatrixXd basis);

  const Eigen::MatrixXd& basis() const { return basis_; }
  Eigen::Index ambient_dim() const { return basis_.rows(); }
  Eigen::Index subspace_dim() const { return basis_.cols(); }

 private:
  Eigen::MatrixXd basis_;
};

/// N Grassmann points sharing (d, p).
class GrassmannSet {
 public:
  explicit GrassmannSet(std::vector<GrassmannPoint> points);

  std::size_t size() const { return points_.size(); }
  Eigen::Index ambient_dim() const { return d_; }
  Eigen::Index subspace_dim() const { return p_; }
  const GrassmannPoint& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<GrassmannPoint>& points() const { return points_; }

  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

 private:
  std::vector<GrassmannPoint> points_;
  Eigen::Index d_ = 0;
  Eigen::Index p_ = 0;
};

/// First p left singular vectors of a D x P sample matrix, ordered by
/// descending singular value. Throws DimensionError if p > min(D, P) and
/// RankDeficiencyError if the numerical rank is below p.
GrassmannPoint from_samples(const Eigen::MatrixXd& samples, Eigen::Index p);

/// Projection embedding X X^T.
Eigen::MatrixXd embed(const GrassmannPoint& x);

/// ||X1 X1^T - X2 X2^T||_F, evaluated through the p x p cross product so the
/// d x d embeddings are never formed.
double distance(const GrassmannPoint& x1, const GrassmannPoint& x2);

}  // namespace glrr
