#pragma once

#include "glrr/manifold.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace glrr {

// ADMM for the l2/l1-noise Grassmann LRR model
//
//   min ||E||_{l2/l1} + lambda ||Z||_*   s.t.  X = X x_3 Z + E
//
// where X stacks the projectors B_i = X_i X_i^T. Starting from E = xi = 0,
// every slice of E and of the multiplier xi stays in span{B_1..B_N}, so both
// are stored as N x N coefficient matrices (row i holds the coefficients of
// slice i). Inner products between slices then reduce to the Gram matrix
// Delta_ij = tr(B_i B_j), and memory is O(N^2) independent of d.

struct AdmmParams {
  double lambda = 1.0;
  double rho0 = 1.9;
  double mu0 = 0.01;
  double mu_max = 1e10;
  double eps1 = 1e-4;
  double eps2 = 1e-4;
  std::optional<double> eta;  // defaults to kEtaMargin * sigma_max(Delta)
  int max_iters = 2000;
};

inline constexpr double kEtaMargin = 1.02;

struct AdmmState {
  Eigen::MatrixXd z;
  Eigen::MatrixXd a_e;   // coefficients of the error slices
  Eigen::MatrixXd a_xi;  // coefficients of the multiplier slices
  double mu = 0.01;
  int iter = 0;

  static AdmmState initial(Eigen::Index n, double mu0);
};

struct IterationRecord {
  int iter = 0;
  double primal_residual = 0.0;   // ||X - X x_3 Z - E||_F / ||X||_F
  double update_magnitude = 0.0;  // mu/||X|| * max(sqrt(eta)||dZ||, ||dE||)
  double mu = 0.0;                // penalty used by this iteration
  Eigen::Index rank_z = 0;
};

enum class Termination { kConverged, kMaxIterations };

std::string to_string(Termination t);

struct AdmmResult {
  Eigen::MatrixXd z;
  Eigen::MatrixXd a_e;
  Eigen::MatrixXd a_xi;
  double mu = 0.0;
  double eta = 0.0;
  double tensor_norm = 0.0;
  int iterations = 0;
  int best_iter = 0;  // iteration whose state is returned
  Termination termination = Termination::kMaxIterations;
  std::vector<IterationRecord> history;
  std::vector<double> mu_trajectory;  // mu^0, mu^1, ..., mu^k

  bool converged() const { return termination == Termination::kConverged; }
};

/// Singular value thresholding: U max(S - tau, 0) V^T. Throws ParameterError
/// for tau < 0 and NumericalError if the SVD produces non-finite values.
Eigen::MatrixXd svt(const Eigen::MatrixXd& m, double tau);

/// Frobenius norm of sum_j c_j B_j for every row c of `coeffs`, i.e.
/// sqrt(c Delta c^T), clamped at zero before the root.
Eigen::VectorXd slice_norms(const Eigen::MatrixXd& coeffs, const Eigen::MatrixXd& delta);

/// ||sum_i sum_j C_ij B_j||_F over the whole tensor.
double tensor_norm(const Eigen::MatrixXd& coeffs, const Eigen::MatrixXd& delta);

/// ||X||_F = sqrt(trace Delta) = sqrt(N p) for orthonormal bases.
double data_tensor_norm(const Eigen::MatrixXd& delta);

/// Largest eigenvalue of Delta, which equals the squared spectral norm of the
/// mode-3 matricization of X.
double matricization_norm_sq(const Eigen::MatrixXd& delta);

/// Closed-form E step: row-wise shrinkage of V = (I - Z) + A_xi / mu.
Eigen::MatrixXd e_update(const AdmmState& state, const Eigen::MatrixXd& delta);

/// Smooth part f(Z) = <xi, R> + mu/2 ||R||_F^2 with R = X - X x_3 Z - E, up to
/// the same coefficient-basis reduction.
double smooth_objective(const Eigen::MatrixXd& z, const AdmmState& state,
                        const Eigen::MatrixXd& delta);

/// Gradient of smooth_objective with respect to Z:
/// mu Z Delta - mu (Delta - Psi + Phi / mu), with Phi = A_xi Delta, Psi = A_E Delta.
Eigen::MatrixXd smooth_gradient(const Eigen::MatrixXd& z, const AdmmState& state,
                                const Eigen::MatrixXd& delta);

/// Linearized proximal Z step, returning SVT(Z - grad / (eta mu), lambda / (eta mu)).
Eigen::MatrixXd z_update(const AdmmState& state, const Eigen::MatrixXd& delta, double lambda,
                         double eta);

struct DualUpdate {
  Eigen::MatrixXd a_xi;
  double mu = 0.0;
  double update_magnitude = 0.0;
  double primal_residual = 0.0;  // relative
};

/// Multiplier ascent and adaptive penalty. `state` must already hold Z^{k+1}
/// and E^{k+1}; `prev_z` and `prev_a_e` are the iterates they replaced.
DualUpdate dual_and_penalty_update(const AdmmState& state, const Eigen::MatrixXd& prev_z,
                                   const Eigen::MatrixXd& prev_a_e,
                                   const Eigen::MatrixXd& delta, const AdmmParams& params,
                                   double eta);

/// Validates params against Delta and resolves eta. Throws ParameterError.
double resolve_eta(const AdmmParams& params, const Eigen::MatrixXd& delta);

using IterationObserver = std::function<void(const IterationRecord&)>;

/// Runs the solver on the projection Gram matrix of a Grassmann set. Reaching
/// max_iters is reported through the result, not thrown.
AdmmResult run_admm(const Eigen::MatrixXd& delta, const AdmmParams& params,
                    const IterationObserver& observer = {});

AdmmResult run_admm(const GrassmannSet& set, const AdmmParams& params,
                    const IterationObserver& observer = {});

/// ||E||_{l2/l1} + lambda ||Z||_* for a feasible pair (E = X - X x_3 Z).
double l21_objective(const Eigen::MatrixXd& z, const Eigen::MatrixXd& delta, double lambda);

}  // namespace glrr
