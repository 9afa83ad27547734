#include "glrr/kernel.hpp"

#include "glrr/error.hpp"

#include <cmath>
#include <string>

namespace glrr {

namespace {

// Stacks all bases side by side, d x (N p), so one GEMM per row block yields
// every X_i^T X_j for j >= i.
Eigen::MatrixXd stack_bases(const GrassmannSet& set) {
  const auto d = set.ambient_dim();
  const auto p = set.subspace_dim();
  Eigen::MatrixXd all(d, p * static_cast<Eigen::Index>(set.size()));
  for (std::size_t i = 0; i < set.size(); ++i) {
    all.middleCols(static_cast<Eigen::Index>(i) * p, p) = set[i].basis();
  }
  return all;
}

template <typename EntryFn>
Eigen::MatrixXd upper_triangle_gram(const GrassmannSet& set, EntryFn entry) {
  const auto n = static_cast<Eigen::Index>(set.size());
  const auto p = set.subspace_dim();
  const Eigen::MatrixXd all = stack_bases(set);
  Eigen::MatrixXd out(n, n);
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::MatrixXd cross =
        all.middleCols(i * p, p).transpose() * all.rightCols((n - i) * p);
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = entry(cross.middleCols((j - i) * p, p));
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

}  // namespace

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::kProjection:
      return "proj";
    case KernelKind::kCanonicalCorrelation:
      return "cc";
    case KernelKind::kCombined:
      return "cc+proj";
  }
  return "unknown";
}

GramMatrix proj_gram(const GrassmannSet& set) {
  GramMatrix g;
  g.kind = KernelKind::kProjection;
  g.values = upper_triangle_gram(
      set, [](const auto& cross) { return cross.squaredNorm(); });
  return g;
}

GramMatrix cc_gram(const GrassmannSet& set) {
  GramMatrix g;
  g.kind = KernelKind::kCanonicalCorrelation;
  g.values = upper_triangle_gram(set, [](const auto& cross) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross);
    return svd.singularValues().sum();
  });
  return g;
}

GramMatrix combined_gram(const GrassmannSet& set, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ParameterError("combined kernel weight alpha must lie in [0, 1], got " +
                         std::to_string(alpha));
  }
  GramMatrix g;
  g.kind = KernelKind::kCombined;
  g.alpha = alpha;
  if (alpha == 0.0) {
    g.values = proj_gram(set).values;
  } else if (alpha == 1.0) {
    g.values = cc_gram(set).values;
  } else {
    g.values = alpha * cc_gram(set).values + (1.0 - alpha) * proj_gram(set).values;
  }
  return g;
}

GramMatrix build_gram(const GrassmannSet& set, KernelKind kind, double alpha) {
  switch (kind) {
    case KernelKind::kProjection:
      return proj_gram(set);
    case KernelKind::kCanonicalCorrelation:
      return cc_gram(set);
    case KernelKind::kCombined:
      return combined_gram(set, alpha);
  }
  throw ParameterError("unknown kernel kind");
}

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& k) {
  if (k.rows() != k.cols()) throw InputError("kernel matrix must be square");
  if (!k.allFinite()) throw InputError("kernel matrix has non-finite entries");
  const double asym = k.size() ? (k - k.transpose()).cwiseAbs().maxCoeff() : 0.0;
  const double scale = k.size() ? std::max(1.0, k.cwiseAbs().maxCoeff()) : 1.0;
  if (asym > GramMatrix::kSymmetryTol * scale) {
    throw InputError("kernel matrix is not symmetric (max asymmetry " + std::to_string(asym) +
                     ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigendecomposition failed");
  // Eigen returns ascending order.
  SymmetricEigen out;
  out.eigvals = es.eigenvalues().reverse();
  out.eigvecs = es.eigenvectors().rowwise().reverse();
  return out;
}

PsdSqrt psd_sqrt(const GramMatrix& k) {
  SymmetricEigen eig = symmetric_eigen(k.values);
  PsdSqrt out;
  out.clamped_mass = 0.0;
  Eigen::VectorXd root_vals(eig.eigvals.size());
  for (Eigen::Index i = 0; i < eig.eigvals.size(); ++i) {
    const double s = eig.eigvals(i);
    if (s < 0.0) out.clamped_mass += -s;
    root_vals(i) = std::sqrt(std::max(s, 0.0));
  }
  out.root = eig.eigvecs * root_vals.asDiagonal() * eig.eigvecs.transpose();
  out.eigvecs = std::move(eig.eigvecs);
  out.eigvals = std::move(eig.eigvals);
  return out;
}

}  // namespace glrr
