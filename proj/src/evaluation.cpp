#include "glrr/evaluation.hpp"

#include "glrr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace glrr {

namespace {

// Shortest augmenting path Hungarian algorithm with row/column potentials.
// Returns the optimal column for each row and the optimal cost.
double hungarian(const Eigen::MatrixXd& a, std::vector<int>& col_of_row) {
  const int n = static_cast<int>(a.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  col_of_row.assign(static_cast<std::size_t>(n), -1);
  double total = 0.0;
  for (int j = 1; j <= n; ++j) {
    col_of_row[p[j] - 1] = j - 1;
    total += a(p[j] - 1, j - 1);
  }
  return total;
}

double optimal_cost(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return 0.0;
  std::vector<int> unused;
  return hungarian(a, unused);
}

}  // namespace

Assignment assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) {
    throw InputError("assignment needs a square table, got " + std::to_string(cost.rows()) +
                     "x" + std::to_string(cost.cols()));
  }
  if (!cost.allFinite()) throw InputError("assignment table has non-finite entries");
  const int n = static_cast<int>(cost.rows());
  Assignment out;
  if (n == 0) return out;

  std::vector<int> cols;
  const double best = hungarian(cost, cols);
  const double tol = 1e-9 * std::max(1.0, cost.cwiseAbs().maxCoeff() * n);

  // Walk rows in order and fix each to the smallest column that still admits an
  // optimal completion of the remaining rows.
  std::vector<int> free_cols(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) free_cols[j] = j;
  double fixed = 0.0;
  out.column_of_row.assign(static_cast<std::size_t>(n), -1);
  for (int r = 0; r < n; ++r) {
    const int rest = n - r - 1;
    bool placed = false;
    for (std::size_t idx = 0; idx < free_cols.size() && !placed; ++idx) {
      const int c = free_cols[idx];
      Eigen::MatrixXd sub(rest, rest);
      for (int i = 0; i < rest; ++i) {
        int jj = 0;
        for (std::size_t t = 0; t < free_cols.size(); ++t) {
          if (t == idx) continue;
          sub(i, jj++) = cost(r + 1 + i, free_cols[t]);
        }
      }
      if (fixed + cost(r, c) + optimal_cost(sub) <= best + tol) {
        out.column_of_row[r] = c;
        fixed += cost(r, c);
        free_cols.erase(free_cols.begin() + static_cast<std::ptrdiff_t>(idx));
        placed = true;
      }
    }
    if (!placed) {
      // Round-off pushed every candidate over the bound; keep the Hungarian answer.
      out.column_of_row = cols;
      fixed = best;
      break;
    }
  }
  out.total_cost = 0.0;
  for (int r = 0; r < n; ++r) out.total_cost += cost(r, out.column_of_row[r]);
  return out;
}

ClusterReport accuracy(const ClusterLabels& pred, const ClusterLabels& truth) {
  if (pred.size() != truth.size()) {
    throw InputError("prediction has " + std::to_string(pred.size()) + " labels but truth has " +
                     std::to_string(truth.size()));
  }
  ClusterReport rep;
  rep.n = pred.size();
  const int kp = pred.k;
  const int kt = truth.k;
  rep.contingency = Eigen::MatrixXi::Zero(kp, kt);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const int a = pred.labels[i];
    const int b = truth.labels[i];
    if (a < 0 || a >= kp || b < 0 || b >= kt) throw InputError("label out of range");
    ++rep.contingency(a, b);
  }

  const int k = std::max(kp, kt);
  rep.k = k;
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(k, k);
  cost.topLeftCorner(kp, kt) = -rep.contingency.cast<double>();
  const Assignment match = assignment(cost);

  rep.mapping.assign(static_cast<std::size_t>(kp), -1);
  long matched = 0;
  for (int r = 0; r < kp; ++r) {
    const int c = match.column_of_row[r];
    if (c < kt) {
      rep.mapping[r] = c;
      matched += rep.contingency(r, c);
    }
  }
  rep.accuracy = rep.n ? static_cast<double>(matched) / static_cast<double>(rep.n) : 0.0;
  return rep;
}

}  // namespace glrr
