#include "glrr/manifold.hpp"

#include "glrr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace glrr {

GrassmannPoint::GrassmannPoint(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
  const auto d = basis_.rows();
  const auto p = basis_.cols();
  if (p < 1 || p > d) {
    throw DimensionError("Grassmann point needs 1 <= p <= d, got d=" + std::to_string(d) +
                         " p=" + std::to_string(p));
  }
  if (!basis_.allFinite()) throw InputError("Grassmann basis has non-finite entries");
  const Eigen::MatrixXd gram = basis_.transpose() * basis_;
  const double err = (gram - Eigen::MatrixXd::Identity(p, p)).cwiseAbs().maxCoeff();
  if (err > kOrthonormalityTol) {
    throw InputError("Grassmann basis is not orthonormal (max |B^T B - I| = " +
                     std::to_string(err) + ")");
  }
}

GrassmannSet::GrassmannSet(std::vector<GrassmannPoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw InputError("Grassmann set must contain at least one point");
  d_ = points_.front().ambient_dim();
  p_ = points_.front().subspace_dim();
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].ambient_dim() != d_ || points_[i].subspace_dim() != p_) {
      throw DimensionError("point " + std::to_string(i) + " has shape " +
                           std::to_string(points_[i].ambient_dim()) + "x" +
                           std::to_string(points_[i].subspace_dim()) + ", expected " +
                           std::to_string(d_) + "x" + std::to_string(p_));
    }
  }
}

GrassmannPoint from_samples(const Eigen::MatrixXd& samples, Eigen::Index p) {
  const auto rows = samples.rows();
  const auto cols = samples.cols();
  if (cols < 1 || rows < 1) throw DimensionError("sample matrix is empty");
  if (p < 1 || p > std::min(rows, cols)) {
    throw DimensionError("requested p=" + std::to_string(p) + " exceeds min(D, P)=" +
                         std::to_string(std::min(rows, cols)));
  }
  if (!samples.allFinite()) throw InputError("sample matrix has non-finite entries");

  Eigen::JacobiSVD<Eigen::MatrixXd, Eigen::ColPivHouseholderQRPreconditioner> svd(
      samples, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double tol = static_cast<double>(std::max(rows, cols)) *
                     std::numeric_limits<double>::epsilon() * (sv.size() ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) ++rank;
  }
  if (rank < p) {
    throw RankDeficiencyError("sample matrix has numerical rank " + std::to_string(rank) +
                              " but p=" + std::to_string(p) + " was requested (short by " +
                              std::to_string(p - rank) + ")");
  }

  // Re-orthonormalize to scrub round-off in the SVD factor.
  Eigen::MatrixXd basis = svd.matrixU().leftCols(p);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, p);
  const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < p; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return GrassmannPoint(std::move(q));
}

Eigen::MatrixXd embed(const GrassmannPoint& x) {
  return x.basis() * x.basis().transpose();
}

double distance(const GrassmannPoint& x1, const GrassmannPoint& x2) {
  if (x1.ambient_dim() != x2.ambient_dim() || x1.subspace_dim() != x2.subspace_dim()) {
    throw DimensionError("distance between points of different shape");
  }
  // ||A - B||_F^2 = 2p - 2 ||X2^T X1||_F^2 = 2 ||(I - X2 X2^T) X1||_F^2. The
  // residual form avoids cancellation for nearby subspaces.
  const Eigen::MatrixXd residual =
      x1.basis() - x2.basis() * (x2.basis().transpose() * x1.basis());
  return std::sqrt(2.0) * residual.norm();
}

}  // namespace glrr
