#include "glrr/solver_admm.hpp"

#include "glrr/error.hpp"
#include "glrr/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace glrr {

namespace {

Eigen::MatrixXd svt_ranked(const Eigen::MatrixXd& m, double tau, Eigen::Index* rank) {
  if (!(tau >= 0.0)) throw ParameterError("SVT threshold must be non-negative");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = svd.singularValues();
  if (!s.allFinite()) throw NumericalError("SVD produced non-finite singular values");
  Eigen::Index kept = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    s(i) = std::max(s(i) - tau, 0.0);
    if (s(i) > 0.0) ++kept;
  }
  if (rank) *rank = kept;
  if (kept == 0) return Eigen::MatrixXd::Zero(m.rows(), m.cols());
  return svd.matrixU().leftCols(kept) * s.head(kept).asDiagonal() *
         svd.matrixV().leftCols(kept).transpose();
}

Eigen::MatrixXd z_update_ranked(const AdmmState& state, const Eigen::MatrixXd& delta,
                                double lambda, double eta, Eigen::Index* rank) {
  const double step = eta * state.mu;
  const Eigen::MatrixXd grad = smooth_gradient(state.z, state, delta);
  return svt_ranked(state.z - grad / step, lambda / step, rank);
}

// I - Z - A_E: coefficients of the reconstruction residual slices.
Eigen::MatrixXd residual_coeffs(const Eigen::MatrixXd& z, const Eigen::MatrixXd& a_e) {
  Eigen::MatrixXd r = -z - a_e;
  r.diagonal().array() += 1.0;
  return r;
}

}  // namespace

std::string to_string(Termination t) {
  return t == Termination::kConverged ? "converged" : "max_iters";
}

AdmmState AdmmState::initial(Eigen::Index n, double mu0) {
  AdmmState s;
  s.z = Eigen::MatrixXd::Zero(n, n);
  s.a_e = Eigen::MatrixXd::Zero(n, n);
  s.a_xi = Eigen::MatrixXd::Zero(n, n);
  s.mu = mu0;
  s.iter = 0;
  return s;
}

Eigen::MatrixXd svt(const Eigen::MatrixXd& m, double tau) {
  return svt_ranked(m, tau, nullptr);
}

Eigen::VectorXd slice_norms(const Eigen::MatrixXd& coeffs, const Eigen::MatrixXd& delta) {
  const Eigen::VectorXd sq = (coeffs * delta).cwiseProduct(coeffs).rowwise().sum();
  return sq.cwiseMax(0.0).cwiseSqrt();
}

double tensor_norm(const Eigen::MatrixXd& coeffs, const Eigen::MatrixXd& delta) {
  return std::sqrt(std::max(0.0, (coeffs * delta).cwiseProduct(coeffs).sum()));
}

double data_tensor_norm(const Eigen::MatrixXd& delta) {
  return std::sqrt(std::max(0.0, delta.trace()));
}

double matricization_norm_sq(const Eigen::MatrixXd& delta) {
  return std::max(0.0, symmetric_eigen(delta).eigvals(0));
}

Eigen::MatrixXd e_update(const AdmmState& state, const Eigen::MatrixXd& delta) {
  Eigen::MatrixXd v = -state.z + state.a_xi / state.mu;
  v.diagonal().array() += 1.0;
  const Eigen::VectorXd m = slice_norms(v, delta);
  const double inv_mu = 1.0 / state.mu;
  Eigen::MatrixXd a_e(v.rows(), v.cols());
#pragma omp parallel for
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    if (m(i) < inv_mu) {
      a_e.row(i).setZero();
    } else {
      a_e.row(i) = (1.0 - inv_mu / m(i)) * v.row(i);
    }
  }
  return a_e;
}

double smooth_objective(const Eigen::MatrixXd& z, const AdmmState& state,
                        const Eigen::MatrixXd& delta) {
  const Eigen::MatrixXd r = residual_coeffs(z, state.a_e);
  const double linear = (state.a_xi * delta).cwiseProduct(r).sum();
  const double quad = (r * delta).cwiseProduct(r).sum();
  return linear + 0.5 * state.mu * quad;
}

Eigen::MatrixXd smooth_gradient(const Eigen::MatrixXd& z, const AdmmState& state,
                                const Eigen::MatrixXd& delta) {
  const Eigen::MatrixXd phi = state.a_xi * delta;
  const Eigen::MatrixXd psi = state.a_e * delta;
  return state.mu * (z * delta) - state.mu * (delta - psi + phi / state.mu);
}

Eigen::MatrixXd z_update(const AdmmState& state, const Eigen::MatrixXd& delta, double lambda,
                         double eta) {
  return z_update_ranked(state, delta, lambda, eta, nullptr);
}

DualUpdate dual_and_penalty_update(const AdmmState& state, const Eigen::MatrixXd& prev_z,
                                   const Eigen::MatrixXd& prev_a_e,
                                   const Eigen::MatrixXd& delta, const AdmmParams& params,
                                   double eta) {
  const double x_norm = data_tensor_norm(delta);
  const Eigen::MatrixXd r = residual_coeffs(state.z, state.a_e);

  DualUpdate out;
  out.a_xi = state.a_xi + state.mu * r;
  const double dz = (state.z - prev_z).norm();
  const double de = tensor_norm(state.a_e - prev_a_e, delta);
  out.update_magnitude = state.mu / x_norm * std::max(std::sqrt(eta) * dz, de);
  out.primal_residual = tensor_norm(r, delta) / x_norm;
  const double rho = out.update_magnitude <= params.eps2 ? params.rho0 : 1.0;
  out.mu = std::min(rho * state.mu, params.mu_max);
  return out;
}

double resolve_eta(const AdmmParams& params, const Eigen::MatrixXd& delta) {
  if (!(params.lambda > 0.0) || !std::isfinite(params.lambda)) {
    throw ParameterError("ADMM lambda must be positive");
  }
  if (!(params.mu0 > 0.0) || !(params.mu_max >= params.mu0)) {
    throw ParameterError("ADMM requires 0 < mu0 <= mu_max");
  }
  if (!(params.rho0 >= 1.0)) throw ParameterError("ADMM rho0 must be >= 1");
  if (!(params.eps1 > 0.0) || !(params.eps2 > 0.0)) {
    throw ParameterError("ADMM tolerances must be positive");
  }
  if (params.max_iters < 1) throw ParameterError("ADMM max_iters must be >= 1");
  const double norm_sq = matricization_norm_sq(delta);
  if (!params.eta) return kEtaMargin * norm_sq;
  if (!(*params.eta > norm_sq)) {
    throw ParameterError("ADMM eta=" + std::to_string(*params.eta) +
                         " must exceed sigma_max(Delta)=" + std::to_string(norm_sq));
  }
  return *params.eta;
}

AdmmResult run_admm(const Eigen::MatrixXd& delta, const AdmmParams& params,
                    const IterationObserver& observer) {
  if (delta.rows() != delta.cols() || delta.rows() == 0) {
    throw InputError("ADMM needs a non-empty square Gram matrix");
  }
  const double eta = resolve_eta(params, delta);
  const Eigen::Index n = delta.rows();

  AdmmResult result;
  result.eta = eta;
  result.tensor_norm = data_tensor_norm(delta);

  AdmmState state = AdmmState::initial(n, params.mu0);
  AdmmState best = state;
  double best_residual = std::numeric_limits<double>::infinity();
  result.mu_trajectory.push_back(state.mu);
  for (int k = 0; k < params.max_iters; ++k) {
    const Eigen::MatrixXd prev_z = state.z;
    const Eigen::MatrixXd prev_a_e = state.a_e;

    state.a_e = e_update(state, delta);
    Eigen::Index rank = 0;
    state.z = z_update_ranked(state, delta, params.lambda, eta, &rank);
    const DualUpdate dual = dual_and_penalty_update(state, prev_z, prev_a_e, delta, params, eta);

    IterationRecord rec;
    rec.iter = k + 1;
    rec.primal_residual = dual.primal_residual;
    rec.update_magnitude = dual.update_magnitude;
    rec.mu = state.mu;
    rec.rank_z = rank;
    result.history.push_back(rec);
    if (observer) observer(rec);

    state.a_xi = dual.a_xi;
    state.mu = dual.mu;
    state.iter = k + 1;
    result.mu_trajectory.push_back(state.mu);

    if (!state.z.allFinite() || !state.a_xi.allFinite()) {
      throw NumericalError("ADMM iterate became non-finite at iteration " +
                           std::to_string(k + 1));
    }
    if (dual.primal_residual <= params.eps1 && dual.update_magnitude <= params.eps2) {
      result.termination = Termination::kConverged;
      break;
    }
    if (dual.primal_residual < best_residual) {
      best_residual = dual.primal_residual;
      best = state;
    }
  }

  result.iterations = state.iter;
  if (!result.converged() && best.iter > 0) {
    // Out of iterations: hand back the iterate with the smallest residual.
    result.best_iter = best.iter;
    state = std::move(best);
  } else {
    result.best_iter = state.iter;
  }
  result.z = std::move(state.z);
  result.a_e = std::move(state.a_e);
  result.a_xi = std::move(state.a_xi);
  result.mu = state.mu;
  return result;
}

AdmmResult run_admm(const GrassmannSet& set, const AdmmParams& params,
                    const IterationObserver& observer) {
  return run_admm(proj_gram(set).values, params, observer);
}

double l21_objective(const Eigen::MatrixXd& z, const Eigen::MatrixXd& delta, double lambda) {
  Eigen::MatrixXd r = -z;
  r.diagonal().array() += 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(z);
  return slice_norms(r, delta).sum() + lambda * svd.singularValues().sum();
}

}  // namespace glrr
