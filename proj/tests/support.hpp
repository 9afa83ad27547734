#pragma once

#include "glrr/manifold.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace glrr::testing {

inline Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

inline Eigen::MatrixXd orthonormal(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(rows, cols, rng));
  return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

inline GrassmannSet random_set(int n, int d, int p, std::mt19937_64& rng) {
  std::vector<GrassmannPoint> pts;
  for (int i = 0; i < n; ++i) pts.emplace_back(orthonormal(d, p, rng));
  return GrassmannSet(std::move(pts));
}

inline GrassmannSet rebased(const GrassmannSet& set, std::mt19937_64& rng) {
  std::vector<GrassmannPoint> pts;
  for (const auto& x : set) {
    const Eigen::MatrixXd r = orthonormal(x.subspace_dim(), x.subspace_dim(), rng);
    pts.emplace_back(x.basis() * r);
  }
  return GrassmannSet(std::move(pts));
}

inline Eigen::MatrixXd random_psd(int n, double max_eig, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, max_eig);
  const Eigen::MatrixXd q = orthonormal(n, n, rng);
  Eigen::VectorXd ev(n);
  for (int i = 0; i < n; ++i) ev(i) = u(rng);
  Eigen::MatrixXd k = q * ev.asDiagonal() * q.transpose();
  return 0.5 * (k + k.transpose());
}

inline GrassmannPoint line(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x(i++) = e;
  return GrassmannPoint(x.normalized());
}

}  // namespace glrr::testing
