#pragma once

#include "glrr/kernel.hpp"

#include <Eigen/Dense>

#include <vector>

namespace glrr {

/// One eigenvalue of the kernel and the shrunk value it maps to in Z.
struct SpectrumEntry {
  double sigma = 0.0;
  double shrunk = 0.0;
};

struct FrobeniusSolution {
  Eigen::MatrixXd z;
  std::vector<SpectrumEntry> spectrum;  // descending sigma
  double clamped_mass = 0.0;
  Eigen::Index rank = 0;
};

/// Eigenvalues below this fraction of the largest one count as zero when the
/// threshold sigma > lambda / 2 is evaluated.
inline constexpr double kRelativeEigenFloor = 1e-12;

/// Closed-form minimizer of ||Z K^{1/2} - K^{1/2}||_F^2 + lambda ||Z||_*.
///
/// With K = U diag(sigma) U^T (negative eigenvalues clamped to zero),
/// Z = U diag(d) U^T where d_i = 1 - lambda / (2 sigma_i) if sigma_i > lambda / 2
/// and 0 otherwise. The squared fit term carries no 1/2, hence the halved
/// threshold. With K = proj_gram this is the Frobenius-noise Grassmann LRR
/// model; any other Grassmann kernel gives its kernelized counterpart.
///
/// Throws ParameterError for lambda < 0, InputError for a non-symmetric K and
/// NumericalError if the eigendecomposition fails.
FrobeniusSolution solve_frobenius(const GramMatrix& k, double lambda);

/// Same solution from a precomputed eigendecomposition, so a lambda sweep
/// decomposes K once.
FrobeniusSolution solve_frobenius(const SymmetricEigen& eig, double lambda);

/// ||Z K^{1/2} - K^{1/2}||_F^2 + lambda ||Z||_*, for diagnostics and tests.
double frobenius_objective(const Eigen::MatrixXd& z, const Eigen::MatrixXd& k_root,
                           double lambda);

}  // namespace glrr
