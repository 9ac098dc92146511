#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

#include "cyclestar/instance.hpp"

namespace cyclestar {

// Distances in the path obtained by deleting edge `deleted_edge` from the
// cycle; always >= the cycle metric entrywise.
struct PathMetric {
  int deleted_edge = 0;
  Matrix values;
};

struct ConvexCombination {
  std::vector<double> thetas;  // one coefficient per edge, >= 0, sums to 1
};

struct SandwichCheck {
  double lower_violation = 0.0;  // max over entries of c_ij - M_ij
  double upper_ratio = 1.0;      // max over c_ij > 0 of M_ij / c_ij
};

inline PathMetric path_metric(const HubCycle& cycle, int e) {
  const int h = cycle.h;
  if (e < 0 || e >= h) throw std::invalid_argument("path_metric: edge index out of range");
  PathMetric pm{e, make_matrix(h, h)};
  for (int i = 0; i < h; ++i) {
    for (int j = i + 1; j < h; ++j) {
      // The ascending arc i -> j uses edges i..j-1; it contains e iff
      // i <= e < j. The surviving i-j path is the arc avoiding e.
      const bool ascending_uses_e = (i <= e && e < j);
      const double d = ascending_uses_e ? clockwise_length(cycle, j, i)
                                        : clockwise_length(cycle, i, j);
      pm.values[i][j] = d;
      pm.values[j][i] = d;
    }
  }
  return pm;
}

// Simultaneous row/column ordering that makes the path metric for edge
// e = {e, e+1} a Monge matrix: (e+1, e+2, ..., e+h) mod h.
inline std::vector<int> monge_order(int h, int e) {
  if (e < 0 || e >= h) throw std::invalid_argument("monge_order: edge index out of range");
  std::vector<int> order(h);
  for (int k = 0; k < h; ++k) order[k] = (e + 1 + k) % h;
  return order;
}

// Full quadruple scan: after reordering rows and columns by `order`, checks
// M_ij + M_i'j' <= M_ij' + M_i'j + tolerance for all i < i', j < j'.
inline bool is_monge(const Matrix& matrix, const std::vector<int>& order,
                     double tolerance = 1e-9) {
  const int m = static_cast<int>(order.size());
  for (int i = 0; i < m; ++i) {
    for (int ii = i + 1; ii < m; ++ii) {
      for (int j = 0; j < m; ++j) {
        for (int jj = j + 1; jj < m; ++jj) {
          const double lhs = matrix[order[i]][order[j]] + matrix[order[ii]][order[jj]];
          const double rhs = matrix[order[i]][order[jj]] + matrix[order[ii]][order[j]];
          if (lhs > rhs + tolerance) return false;
        }
      }
    }
  }
  return true;
}

// Coefficients theta_e proportional to c_e * prod_{f != e} (L - 2 c_f),
// computed on edge lengths normalized by L (theta is scale-invariant, and
// the normalized product stays in [0,1]). If some edge carries at least half
// the total length the cycle metric already equals that edge's path metric,
// and theta degenerates to its indicator (lowest index on ties). L = 0 gives
// the uniform vector.
inline ConvexCombination theta_coefficients(const HubCycle& cycle) {
  const int h = cycle.h;
  const double total = cycle.total_length();
  ConvexCombination comb{std::vector<double>(h, 0.0)};
  if (total <= 0.0) {
    for (double& t : comb.thetas) t = 1.0 / h;
    return comb;
  }
  for (int e = 0; e < h; ++e) {
    if (cycle.edge_lengths[e] >= total / 2.0) {
      comb.thetas[e] = 1.0;
      return comb;
    }
  }
  std::vector<double> u(h);
  for (int e = 0; e < h; ++e) u[e] = cycle.edge_lengths[e] / total;
  double norm = 0.0;
  for (int e = 0; e < h; ++e) {
    double prod = u[e];
    for (int f = 0; f < h; ++f)
      if (f != e) prod *= 1.0 - 2.0 * u[f];
    comb.thetas[e] = prod;
    norm += prod;
  }
  for (double& t : comb.thetas) t /= norm;
  return comb;
}

// Evaluates M = sum_e theta_e C^e against the cycle metric. The combination
// is sound when lower_violation <= ~1e-9 and upper_ratio <= 2(1 - 1/h).
inline SandwichCheck verify_sandwich(const HubCycle& cycle, const ConvexCombination& comb) {
  const int h = cycle.h;
  if (static_cast<int>(comb.thetas.size()) != h)
    throw std::invalid_argument("verify_sandwich: coefficient count does not match edge count");
  const CycleMetric metric = build_cycle_metric(cycle);
  Matrix mix = make_matrix(h, h);
  for (int e = 0; e < h; ++e) {
    if (comb.thetas[e] == 0.0) continue;
    const PathMetric pm = path_metric(cycle, e);
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < h; ++j) mix[i][j] += comb.thetas[e] * pm.values[i][j];
  }
  SandwichCheck check;
  check.lower_violation = 0.0;
  check.upper_ratio = 1.0;
  bool any_positive = false;
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < h; ++j) {
      const double c = metric(i, j);
      check.lower_violation = std::max(check.lower_violation, c - mix[i][j]);
      if (c > 0.0) {
        any_positive = true;
        check.upper_ratio = std::max(check.upper_ratio, mix[i][j] / c);
      }
    }
  }
  if (!any_positive) check.upper_ratio = 1.0;  // all-zero metric
  return check;
}

}  // namespace cyclestar
