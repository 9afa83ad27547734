#include "glrr/solver_closed.hpp"

#include "glrr/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace glrr {

FrobeniusSolution solve_frobenius(const GramMatrix& k, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("lambda must be a finite non-negative number, got " +
                         std::to_string(lambda));
  }
  return solve_frobenius(symmetric_eigen(k.values), lambda);
}

FrobeniusSolution solve_frobenius(const SymmetricEigen& eig, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("lambda must be a finite non-negative number, got " +
                         std::to_string(lambda));
  }
  const Eigen::Index n = eig.eigvals.size();
  const double sigma_max = n ? std::max(eig.eigvals(0), 0.0) : 0.0;
  const double floor = kRelativeEigenFloor * sigma_max;
  // Per eigen-direction the objective is sigma (d - 1)^2 + lambda |d|.
  const double threshold = 0.5 * lambda;

  FrobeniusSolution out;
  out.spectrum.reserve(static_cast<std::size_t>(n));
  Eigen::VectorXd shrunk(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = eig.eigvals(i);
    if (s < 0.0) {
      out.clamped_mass += -s;
      s = 0.0;
    }
    double d = 0.0;
    if (s > floor && s > threshold) {
      d = 1.0 - threshold / s;
      ++out.rank;
    }
    shrunk(i) = d;
    out.spectrum.push_back({eig.eigvals(i), d});
  }
  out.z = eig.eigvecs * shrunk.asDiagonal() * eig.eigvecs.transpose();
  // U D U^T is symmetric in exact arithmetic; remove round-off asymmetry.
  out.z = 0.5 * (out.z + out.z.transpose()).eval();
  return out;
}

double frobenius_objective(const Eigen::MatrixXd& z, const Eigen::MatrixXd& k_root,
                           double lambda) {
  const double fit = (z * k_root - k_root).squaredNorm();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(z);
  return fit + lambda * svd.singularValues().sum();
}

}  // namespace glrr
