#pragma once

#include "glrr/manifold.hpp"

#include <Eigen/Dense>

#include <string>

namespace glrr {

enum class KernelKind { kProjection, kCanonicalCorrelation, kCombined };

std::string to_string(KernelKind kind);

/// Symmetric N x N kernel matrix over a Grassmann set.
struct GramMatrix {
  static constexpr double kSymmetryTol = 1e-10;

  Eigen::MatrixXd values;
  KernelKind kind = KernelKind::kProjection;
  double alpha = 0.0;  // mixing weight, combined kernel only

  Eigen::Index size() const { return values.rows(); }
};

/// Projection kernel ||X_i^T X_j||_F^2. Only p x p cross products are formed.
GramMatrix proj_gram(const GrassmannSet& set);

/// Canonical-correlation kernel: sum of all principal-angle cosines, i.e. the
/// nuclear norm of X_i^T X_j.
GramMatrix cc_gram(const GrassmannSet& set);

/// alpha * cc + (1 - alpha) * proj. Throws ParameterError for alpha outside [0, 1].
GramMatrix combined_gram(const GrassmannSet& set, double alpha);

/// Dispatches on kind; alpha is ignored unless kind == kCombined.
GramMatrix build_gram(const GrassmannSet& set, KernelKind kind, double alpha = 0.0);

/// Symmetric eigendecomposition K = U diag(sigma) U^T with sigma descending.
struct SymmetricEigen {
  Eigen::MatrixXd eigvecs;
  Eigen::VectorXd eigvals;
};

/// Throws InputError on a non-square or non-symmetric input and NumericalError
/// if the eigensolver fails.
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& k);

struct PsdSqrt {
  Eigen::MatrixXd root;
  Eigen::MatrixXd eigvecs;
  Eigen::VectorXd eigvals;  // unclamped, descending
  double clamped_mass = 0.0;  // sum of |negative eigenvalues| dropped before the root
};

/// PSD square root with negative eigenvalues clamped to zero.
PsdSqrt psd_sqrt(const GramMatrix& k);

}  // namespace glrr
