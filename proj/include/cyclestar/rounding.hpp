#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cyclestar/instance.hpp"
#include "cyclestar/monge.hpp"
#include "cyclestar/rng.hpp"

namespace cyclestar {

struct RoundingOutcome {
  Assignment assignment;
  double u_value = 0.0;
  std::vector<int> order;
};

// One candidate from a derandomized threshold sweep: the assignment realized
// on the whole interval [u_lo, u_hi) of thresholds.
struct SweepOutcome {
  double u_lo = 0.0;
  double u_hi = 1.0;
  double u_mid = 0.5;
  Assignment assignment;
};

// The h cyclic hub orders used by the rounding step, one per deleted edge;
// identical to the ordering that makes that edge's path metric Monge.
inline std::vector<std::vector<int>> pi_orders(int h) {
  if (h < 3) throw std::invalid_argument("pi_orders: h >= 3 required");
  std::vector<std::vector<int>> orders;
  orders.reserve(h);
  for (int e = 0; e < h; ++e) orders.push_back(monge_order(h, e));
  return orders;
}

// Compensated prefix sums of row[order[0]], row[order[1]], ... normalized by
// the row total so the final prefix is exactly 1. Rejects rows that are not
// stochastic within `tol`.
inline std::vector<double> stochastic_prefix(const std::vector<double>& row,
                                             const std::vector<int>& order,
                                             double tol = 1e-9) {
  const int h = static_cast<int>(order.size());
  if (static_cast<int>(row.size()) != h)
    throw std::invalid_argument("stochastic_prefix: row size does not match order");
  std::vector<double> prefix(h);
  double sum = 0.0, comp = 0.0;
  for (int k = 0; k < h; ++k) {
    const double v = row[order[k]];
    if (!(v >= 0.0)) throw std::invalid_argument("stochastic_prefix: negative entry");
    const double t = sum + v;
    comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
    prefix[k] = sum + comp;
  }
  const double total = prefix[h - 1];
  if (std::fabs(total - 1.0) > tol)
    throw std::invalid_argument("stochastic_prefix: row is not stochastic");
  for (double& p : prefix) p /= total;
  prefix[h - 1] = 1.0;
  return prefix;
}

// Rounds every row of x with the single shared threshold u: node p goes to
// hub order[k] for the minimal k with u < prefix_k of row p in `order`.
inline RoundingOutcome dependent_rounding(const Matrix& x, const std::vector<int>& order,
                                          double u) {
  if (!(u >= 0.0 && u < 1.0))
    throw std::invalid_argument("dependent_rounding: u must lie in [0, 1)");
  const int n = static_cast<int>(x.size());
  const int h = static_cast<int>(order.size());
  RoundingOutcome out;
  out.u_value = u;
  out.order = order;
  out.assignment.hub_of.resize(n);
  for (int p = 0; p < n; ++p) {
    const std::vector<double> prefix = stochastic_prefix(x[p], order);
    int k = 0;
    while (k < h - 1 && !(u < prefix[k])) ++k;
    out.assignment.hub_of[p] = order[k];
  }
  return out;
}

// Convenience wrapper: one seeded threshold draw.
inline RoundingOutcome dependent_rounding_seeded(const Matrix& x, const std::vector<int>& order,
                                                 std::uint64_t seed) {
  Rng rng(seed);
  return dependent_rounding(x, order, rng.uniform());
}

// Sorted union over nodes of the proper prefix sums in (0, 1); between two
// consecutive values every dependent_rounding outcome is constant, so
// evaluating at segment midpoints enumerates all realizable assignments.
// Deduplication at 1e-12 includes the implicit segment ends 0 and 1, which
// keeps every segment midpoint strictly inside [0, 1).
inline std::vector<double> breakpoints(const Matrix& x, const std::vector<int>& order) {
  std::vector<double> points;
  for (const auto& row : x) {
    const std::vector<double> prefix = stochastic_prefix(row, order);
    for (std::size_t k = 0; k + 1 < prefix.size(); ++k)
      if (prefix[k] > 1e-12 && prefix[k] < 1.0 - 1e-12) points.push_back(prefix[k]);
  }
  std::sort(points.begin(), points.end());
  std::vector<double> dedup;
  for (double v : points)
    if (dedup.empty() || v - dedup.back() > 1e-12) dedup.push_back(v);
  return dedup;
}

inline std::vector<SweepOutcome> sweep_outcomes(const Matrix& x, const std::vector<int>& order) {
  const std::vector<double> cuts = breakpoints(x, order);
  std::vector<SweepOutcome> outcomes;
  outcomes.reserve(cuts.size() + 1);
  double lo = 0.0;
  for (std::size_t s = 0; s <= cuts.size(); ++s) {
    const double hi = s < cuts.size() ? cuts[s] : 1.0;
    SweepOutcome seg;
    seg.u_lo = lo;
    seg.u_hi = hi;
    seg.u_mid = lo + (hi - lo) / 2.0;
    seg.assignment = dependent_rounding(x, order, seg.u_mid).assignment;
    outcomes.push_back(std::move(seg));
    lo = hi;
  }
  return outcomes;
}

// Independent per-node thresholds, each row drawn from its own categorical
// distribution. Deterministic per seed.
inline Assignment independent_rounding(const Matrix& x, std::uint64_t seed) {
  const int n = static_cast<int>(x.size());
  Assignment a;
  a.hub_of.resize(n);
  Rng rng(seed);
  for (int p = 0; p < n; ++p) {
    const int h = static_cast<int>(x[p].size());
    std::vector<int> identity(h);
    for (int i = 0; i < h; ++i) identity[i] = i;
    const std::vector<double> prefix = stochastic_prefix(x[p], identity);
    const double u = rng.uniform();
    int k = 0;
    while (k < h - 1 && !(u < prefix[k])) ++k;
    a.hub_of[p] = k;
  }
  return a;
}

// Expected cost of independent rounding in closed form:
// sum_{p != q} w_pq (sum_i c_pi x_pi + sum_j c_qj x_qj + x_p^T C x_q).
inline double expected_independent_cost(const Instance& inst, const CycleMetric& metric,
                                        const Matrix& x) {
  const int n = inst.n;
  const int h = inst.cycle.h;
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("expected_independent_cost: x row count mismatch");
  std::vector<double> spoke(n, 0.0);
  Matrix metric_x(n, std::vector<double>(h, 0.0));  // row p holds C x_p
  for (int p = 0; p < n; ++p) {
    if (static_cast<int>(x[p].size()) != h)
      throw std::invalid_argument("expected_independent_cost: x column count mismatch");
    double row_sum = 0.0;
    for (double v : x[p]) row_sum += v;
    if (std::fabs(row_sum - 1.0) > 1e-9)
      throw std::invalid_argument("expected_independent_cost: x row is not stochastic");
    for (int i = 0; i < h; ++i) spoke[p] += inst.spoke_costs[p][i] * x[p][i];
    for (int i = 0; i < h; ++i) {
      double acc = 0.0;
      for (int j = 0; j < h; ++j) acc += metric(i, j) * x[p][j];
      metric_x[p][i] = acc;
    }
  }
  double total = 0.0;
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (q == p) continue;
      const double w = inst.flows[p][q];
      if (w == 0.0) continue;
      double cross = 0.0;
      for (int i = 0; i < h; ++i) cross += x[p][i] * metric_x[q][i];
      total += w * (spoke[p] + spoke[q] + cross);
    }
  }
  return total;
}

inline double expected_independent_cost(const Instance& inst, const Matrix& x) {
  return expected_independent_cost(inst, build_cycle_metric(inst.cycle), x);
}

// Method of conditional expectations: fix nodes one at a time to the hub
// minimizing the expected cost with the remaining rows still fractional.
// The result never costs more than expected_independent_cost(inst, x).
inline Assignment derandomize_independent(const Instance& inst, const CycleMetric& metric,
                                          const Matrix& x) {
  const int n = inst.n;
  const int h = inst.cycle.h;
  Matrix work = x;
  Assignment a;
  a.hub_of.assign(n, 0);
  for (int p = 0; p < n; ++p) {
    int best_hub = 0;
    double best_cost = 0.0;
    for (int i = 0; i < h; ++i) {
      std::vector<double> indicator(h, 0.0);
      indicator[i] = 1.0;
      work[p] = indicator;
      const double cost = expected_independent_cost(inst, metric, work);
      if (i == 0 || cost < best_cost) {
        best_cost = cost;
        best_hub = i;
      }
    }
    std::vector<double> indicator(h, 0.0);
    indicator[best_hub] = 1.0;
    work[p] = indicator;
    a.hub_of[p] = best_hub;
  }
  return a;
}

inline Assignment derandomize_independent(const Instance& inst, const Matrix& x) {
  return derandomize_independent(inst, build_cycle_metric(inst.cycle), x);
}

}  // namespace cyclestar
