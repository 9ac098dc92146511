#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cyclestar/instance.hpp"
#include "cyclestar/simplex.hpp"

namespace cyclestar {

struct TransportPlan {
  Matrix flow;  // I x J
  std::vector<double> row_marginals;
  std::vector<double> col_marginals;
};

struct HtpSolution {
  TransportPlan plan;
  double cost = 0.0;
};

namespace detail {

inline double neumaier_sum(const std::vector<double>& v) {
  double s = 0.0, comp = 0.0;
  for (double x : v) {
    const double t = s + x;
    comp += std::fabs(s) >= std::fabs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + comp;
}

}  // namespace detail

// Greedy staircase plan: allocate min(remaining supply, remaining demand) at
// the target cell, then step down when the row is exhausted and right when
// only the column is. A simultaneous row/column exhaustion steps down, so the
// next cell takes a degenerate zero. Marginals are rebalanced to exact
// equality beforehand (excess onto the last coordinate); a mismatch beyond
// 1e-12 relative is an error.
inline TransportPlan northwest_corner(std::vector<double> a, std::vector<double> b) {
  const int rows = static_cast<int>(a.size());
  const int cols = static_cast<int>(b.size());
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("northwest_corner: empty marginal vector");
  for (double v : a)
    if (!(v >= 0.0)) throw std::invalid_argument("northwest_corner: negative supply");
  for (double v : b)
    if (!(v >= 0.0)) throw std::invalid_argument("northwest_corner: negative demand");
  const double sa = detail::neumaier_sum(a);
  const double sb = detail::neumaier_sum(b);
  const double scale = std::max(sa, sb);
  if (std::fabs(sa - sb) > 1e-12 * std::max(scale, 1e-300))
    throw std::invalid_argument("northwest_corner: marginal totals differ beyond tolerance");
  if (sa > sb)
    b.back() += sa - sb;
  else
    a.back() += sb - sa;

  TransportPlan plan{make_matrix(rows, cols), a, b};
  std::vector<double> ra = a;
  std::vector<double> rb = b;
  int i = 0, j = 0;
  for (;;) {
    const double y = ra[i] <= rb[j] ? ra[i] : rb[j];
    plan.flow[i][j] = y;
    ra[i] -= y;
    rb[j] -= y;
    if (i == rows - 1 && j == cols - 1) break;
    if (i == rows - 1)
      ++j;
    else if (j == cols - 1)
      ++i;
    else if (ra[i] <= 0.0)
      ++i;
    else
      ++j;
  }
  return plan;
}

// Joint rounding distribution for one non-hub pair: permute both rows by
// `order`, run the staircase, and map back to hub indexing. Entry (i, j) is
// the probability that one shared threshold sends p to hub i and q to hub j.
inline Matrix nwcr_joint(const std::vector<double>& x_p, const std::vector<double>& x_q,
                         const std::vector<int>& order) {
  const int h = static_cast<int>(order.size());
  if (static_cast<int>(x_p.size()) != h || static_cast<int>(x_q.size()) != h)
    throw std::invalid_argument("nwcr_joint: row size does not match order");
  const double sp = detail::neumaier_sum(x_p);
  const double sq = detail::neumaier_sum(x_q);
  if (std::fabs(sp - 1.0) > 1e-9 || std::fabs(sq - 1.0) > 1e-9)
    throw std::invalid_argument("nwcr_joint: rows not normalized");
  std::vector<double> a(h), b(h);
  for (int k = 0; k < h; ++k) {
    a[k] = x_p[order[k]] / sp;
    b[k] = x_q[order[k]] / sq;
  }
  const TransportPlan plan = northwest_corner(a, b);
  Matrix joint = make_matrix(h, h);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < h; ++j) joint[order[i]][order[j]] = plan.flow[i][j];
  return joint;
}

inline double plan_cost(const Matrix& flow, const Matrix& cost) {
  if (flow.size() != cost.size())
    throw std::invalid_argument("plan_cost: dimension mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < flow.size(); ++i) {
    if (flow[i].size() != cost[i].size())
      throw std::invalid_argument("plan_cost: dimension mismatch");
    for (std::size_t j = 0; j < flow[i].size(); ++j) total += flow[i][j] * cost[i][j];
  }
  return total;
}

inline double plan_cost(const TransportPlan& plan, const Matrix& cost) {
  return plan_cost(plan.flow, cost);
}

// Certified exact transportation solve, used as the optimality oracle the
// staircase plan is checked against. Reuses the embedded simplex.
inline HtpSolution solve_htp_exact(const std::vector<double>& a, const std::vector<double>& b,
                                   const Matrix& cost) {
  const int rows = static_cast<int>(a.size());
  const int cols = static_cast<int>(b.size());
  if (rows == 0 || cols == 0) throw std::invalid_argument("solve_htp_exact: empty marginals");
  if (static_cast<int>(cost.size()) != rows)
    throw std::invalid_argument("solve_htp_exact: cost matrix row count mismatch");
  for (const auto& r : cost) {
    if (static_cast<int>(r.size()) != cols)
      throw std::invalid_argument("solve_htp_exact: cost matrix column count mismatch");
    for (double c : r)
      if (!std::isfinite(c)) throw std::invalid_argument("solve_htp_exact: non-finite cost");
  }
  const double sa = detail::neumaier_sum(a);
  const double sb = detail::neumaier_sum(b);
  if (std::fabs(sa - sb) > 1e-12 * std::max(std::max(sa, sb), 1e-300))
    throw std::invalid_argument("solve_htp_exact: unbalanced marginals");

  LpProblem lp;
  lp.num_vars = rows * cols;
  lp.objective.assign(lp.num_vars, 0.0);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) lp.objective[i * cols + j] = cost[i][j];
  for (int i = 0; i < rows; ++i) {
    std::vector<double> row(lp.num_vars, 0.0);
    for (int j = 0; j < cols; ++j) row[i * cols + j] = 1.0;
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(a[i]);
  }
  for (int j = 0; j < cols; ++j) {
    std::vector<double> row(lp.num_vars, 0.0);
    for (int i = 0; i < rows; ++i) row[i * cols + j] = 1.0;
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(b[j]);
  }
  const LpResult res = solve_simplex(lp);
  HtpSolution sol;
  sol.plan.flow = make_matrix(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) sol.plan.flow[i][j] = res.x[i * cols + j];
  sol.plan.row_marginals = a;
  sol.plan.col_marginals = b;
  sol.cost = res.value;
  return sol;
}

}  // namespace cyclestar
