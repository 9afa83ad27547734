#pragma once

#include "glrr/clustering.hpp"

#include <Eigen/Dense>

#include <vector>

namespace glrr {

struct Assignment {
  std::vector<int> column_of_row;  // row r is matched to column column_of_row[r]
  double total_cost = 0.0;
};

/// Minimum-cost perfect matching on a square cost table (Hungarian method with
/// potentials, O(k^3)). Among optimal matchings the lexicographically smallest
/// column sequence is returned. Throws InputError for non-square or
/// non-finite tables.
Assignment assignment(const Eigen::MatrixXd& cost);

struct ClusterReport {
  double accuracy = 0.0;
  std::vector<int> mapping;  // predicted cluster -> truth class, -1 if unmatched
  Eigen::MatrixXi contingency;  // k_pred x k_truth counts
  std::size_t n = 0;
  int k = 0;  // size of the padded square problem
};

/// Permutation-optimal clustering accuracy. Throws InputError on a length
/// mismatch.
ClusterReport accuracy(const ClusterLabels& pred, const ClusterLabels& truth);

}  // namespace glrr
