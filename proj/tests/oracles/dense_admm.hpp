#pragma once

// Reference ADMM for the l2/l1 Grassmann LRR model that works on the explicit
// d x d projector slices B_i = X_i X_i^T instead of the coefficient basis.
// Every tensor quantity is formed densely, so the cost is O(N^2 d^2); it is
// meant for tiny instances as an independent check of the library solver.

#include "glrr/manifold.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace glrr::oracle {

using Slices = std::vector<Eigen::MatrixXd>;

inline Slices projector_slices(const GrassmannSet& set) {
  Slices b;
  for (const auto& x : set) b.push_back(x.basis() * x.basis().transpose());
  return b;
}

inline double tensor_frobenius(const Slices& t) {
  double s = 0.0;
  for (const auto& m : t) s += m.squaredNorm();
  return std::sqrt(s);
}

// Mode-3 matricization: row i is vec(B_i).
inline Eigen::MatrixXd mode3(const Slices& b) {
  const Eigen::Index d2 = b.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(b.size()), d2);
  for (std::size_t i = 0; i < b.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXd>(b[i].data(), d2);
  }
  return m;
}

inline double mode3_spectral_norm_sq(const Slices& b) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(mode3(b));
  const double s = svd.singularValues()(0);
  return s * s;
}

// X x_3 Z: slice i is sum_j z_ij B_j.
inline Slices mode3_product(const Slices& b, const Eigen::MatrixXd& z) {
  Slices out(b.size(), Eigen::MatrixXd::Zero(b.front().rows(), b.front().cols()));
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i] += z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * b[j];
    }
  }
  return out;
}

struct DenseState {
  Eigen::MatrixXd z;
  Slices e;
  Slices xi;
  double mu = 0.0;
};

inline Slices dense_e_step(const Slices& b, const DenseState& s) {
  const Slices xz = mode3_product(b, s.z);
  Slices e(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Eigen::MatrixXd g = b[i] - xz[i] + s.xi[i] / s.mu;
    const double m = g.norm();
    if (m < 1.0 / s.mu) {
      e[i] = Eigen::MatrixXd::Zero(g.rows(), g.cols());
    } else {
      e[i] = (1.0 - 1.0 / (m * s.mu)) * g;
    }
  }
  return e;
}

// f(Z) = <xi, X - X x_3 Z - E> + mu/2 ||X - X x_3 Z - E||^2 with E = s.e.
inline double dense_smooth_objective(const Slices& b, const DenseState& s,
                                     const Eigen::MatrixXd& z) {
  const Slices xz = mode3_product(b, z);
  double lin = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Eigen::MatrixXd r = b[i] - xz[i] - s.e[i];
    lin += s.xi[i].cwiseProduct(r).sum();
    quad += r.squaredNorm();
  }
  return lin + 0.5 * s.mu * quad;
}

// Direct derivative of the slice sums: d f / d z_ij = -<xi_i + mu R_i, B_j>.
inline Eigen::MatrixXd dense_gradient(const Slices& b, const DenseState& s,
                                      const Eigen::MatrixXd& z) {
  const Slices xz = mode3_product(b, z);
  const auto n = static_cast<Eigen::Index>(b.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::MatrixXd w = s.xi[i] + s.mu * (b[i] - xz[i] - s.e[i]);
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = -w.cwiseProduct(b[j]).sum();
  }
  return g;
}

struct DenseRun {
  std::vector<Eigen::MatrixXd> z_history;
  std::vector<double> mu_history;
  DenseState final_state;
  bool converged = false;
};

inline DenseRun dense_admm(const GrassmannSet& set, double lambda, double eta, int iters,
                           double rho0 = 1.9, double mu0 = 0.01, double mu_max = 1e10,
                           double eps1 = 1e-4, double eps2 = 1e-4, bool stop_early = false) {
  const Slices b = projector_slices(set);
  const auto n = static_cast<Eigen::Index>(b.size());
  const Eigen::Index d = b.front().rows();
  const double x_norm = tensor_frobenius(b);

  DenseState s;
  s.z = Eigen::MatrixXd::Zero(n, n);
  s.e.assign(b.size(), Eigen::MatrixXd::Zero(d, d));
  s.xi.assign(b.size(), Eigen::MatrixXd::Zero(d, d));
  s.mu = mu0;

  DenseRun run;
  for (int k = 0; k < iters; ++k) {
    const Eigen::MatrixXd z_prev = s.z;
    const Slices e_prev = s.e;
    s.e = dense_e_step(b, s);

    const Eigen::MatrixXd grad = dense_gradient(b, s, s.z);
    const double step = eta * s.mu;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(s.z - grad / step,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd sv =
        (svd.singularValues().array() - lambda / step).cwiseMax(0.0).matrix();
    s.z = svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();

    const Slices xz = mode3_product(b, s.z);
    double resid_sq = 0.0;
    double de_sq = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const Eigen::MatrixXd r = b[i] - xz[i] - s.e[i];
      resid_sq += r.squaredNorm();
      s.xi[i] += s.mu * r;
      de_sq += (s.e[i] - e_prev[i]).squaredNorm();
    }
    const double change =
        s.mu / x_norm * std::max(std::sqrt(eta) * (s.z - z_prev).norm(), std::sqrt(de_sq));
    const double rho = change <= eps2 ? rho0 : 1.0;
    s.mu = std::min(rho * s.mu, mu_max);

    run.z_history.push_back(s.z);
    run.mu_history.push_back(s.mu);
    if (std::sqrt(resid_sq) / x_norm <= eps1 && change <= eps2) {
      run.converged = true;
      if (stop_early) break;
    }
  }
  run.final_state = s;
  return run;
}

}  // namespace glrr::oracle
