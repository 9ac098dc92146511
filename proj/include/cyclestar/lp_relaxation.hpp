#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "cyclestar/instance.hpp"
#include "cyclestar/simplex.hpp"

namespace cyclestar {

// Linearized relaxation of the assignment objective. Variable layout:
// x_pi at p*h + i, then one h*h block per unordered non-hub pair p < q with
// y_{piqj} at n*h + pair*h*h + i*h + j (i is p's hub, j is q's hub). Joint
// variables are kept for p < q only; since the hub metric is symmetric the
// ordered-pair objective folds into the weight w_pq + w_qp.
struct LpModel {
  int n = 0;
  int h = 0;
  LpProblem problem;

  int num_pairs() const { return n * (n - 1) / 2; }
  int x_index(int p, int i) const { return p * h + i; }
  int pair_index(int p, int q) const {  // requires p < q
    return p * n - p * (p + 1) / 2 + (q - p - 1);
  }
  int y_index(int pair, int i, int j) const { return n * h + pair * h * h + i * h + j; }
};

// Fractional LP solution: row-stochastic x plus one joint matrix per pair
// p < q whose row marginals are x_p and column marginals x_q.
struct FractionalSolution {
  Matrix x;                // n x h
  std::vector<Matrix> y;   // h x h per pair, index via LpModel::pair_index
};

struct LrpSolution {
  FractionalSolution fractional;
  double value = 0.0;
  LpResult lp;
};

// Spoke-cost and hub-arc-cost components of an LP objective value.
struct ObjectiveSplit {
  double w1 = 0.0;
  double w2 = 0.0;
};

inline LpModel build_lrp(const Instance& inst, const CycleMetric& metric) {
  const int n = inst.n;
  const int h = inst.cycle.h;
  LpModel model;
  model.n = n;
  model.h = h;
  const int num_pairs = model.num_pairs();
  const int num_vars = n * h + num_pairs * h * h;
  model.problem.num_vars = num_vars;
  model.problem.objective.assign(num_vars, 0.0);

  // deg_p = sum_q (w_pq + w_qp): each x_pi carries deg_p * c_pi.
  std::vector<double> deg(n, 0.0);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) deg[p] += inst.flows[p][q] + inst.flows[q][p];
  for (int p = 0; p < n; ++p)
    for (int i = 0; i < h; ++i)
      model.problem.objective[model.x_index(p, i)] = deg[p] * inst.spoke_costs[p][i];
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const double w = inst.flows[p][q] + inst.flows[q][p];
      const int pair = model.pair_index(p, q);
      for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j)
          model.problem.objective[model.y_index(pair, i, j)] = w * metric(i, j);
    }
  }

  // Assignment rows, then per pair the h column-marginal rows (sum_i y = x_qj)
  // followed by the h row-marginal rows (sum_j y = x_pi).
  const int num_rows = n + num_pairs * 2 * h;
  model.problem.rows.reserve(num_rows);
  model.problem.rhs.reserve(num_rows);
  for (int p = 0; p < n; ++p) {
    std::vector<double> row(num_vars, 0.0);
    for (int i = 0; i < h; ++i) row[model.x_index(p, i)] = 1.0;
    model.problem.rows.push_back(std::move(row));
    model.problem.rhs.push_back(1.0);
  }
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const int pair = model.pair_index(p, q);
      for (int j = 0; j < h; ++j) {
        std::vector<double> row(num_vars, 0.0);
        for (int i = 0; i < h; ++i) row[model.y_index(pair, i, j)] = 1.0;
        row[model.x_index(q, j)] = -1.0;
        model.problem.rows.push_back(std::move(row));
        model.problem.rhs.push_back(0.0);
      }
      for (int i = 0; i < h; ++i) {
        std::vector<double> row(num_vars, 0.0);
        for (int j = 0; j < h; ++j) row[model.y_index(pair, i, j)] = 1.0;
        row[model.x_index(p, i)] = -1.0;
        model.problem.rows.push_back(std::move(row));
        model.problem.rhs.push_back(0.0);
      }
    }
  }
  return model;
}

inline LpModel build_lrp(const Instance& inst) {
  return build_lrp(inst, build_cycle_metric(inst.cycle));
}

// Solves the relaxation with the embedded simplex and unpacks the optimal
// basic solution. Throws SimplexError on numerical failure.
inline LrpSolution solve_lp(const LpModel& model) {
  LrpSolution sol;
  sol.lp = solve_simplex(model.problem);
  sol.value = sol.lp.value;
  const int n = model.n;
  const int h = model.h;
  sol.fractional.x = make_matrix(n, h);
  for (int p = 0; p < n; ++p)
    for (int i = 0; i < h; ++i) sol.fractional.x[p][i] = sol.lp.x[model.x_index(p, i)];
  sol.fractional.y.resize(model.num_pairs());
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const int pair = model.pair_index(p, q);
      Matrix& joint = sol.fractional.y[pair];
      joint = make_matrix(h, h);
      for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) joint[i][j] = sol.lp.x[model.y_index(pair, i, j)];
    }
  }
  return sol;
}

// W1 = spoke part, W2 = hub-arc part of the objective at `sol`; their sum is
// the LP objective value.
inline ObjectiveSplit split_objective(const Instance& inst, const CycleMetric& metric,
                                      const FractionalSolution& sol) {
  const int n = inst.n;
  const int h = inst.cycle.h;
  LpModel layout;
  layout.n = n;
  layout.h = h;
  ObjectiveSplit split;
  for (int p = 0; p < n; ++p) {
    double deg = 0.0;
    for (int q = 0; q < n; ++q) deg += inst.flows[p][q] + inst.flows[q][p];
    double spoke = 0.0;
    for (int i = 0; i < h; ++i) spoke += inst.spoke_costs[p][i] * sol.x[p][i];
    split.w1 += deg * spoke;
  }
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const double w = inst.flows[p][q] + inst.flows[q][p];
      const Matrix& joint = sol.y[layout.pair_index(p, q)];
      double arc = 0.0;
      for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) arc += metric(i, j) * joint[i][j];
      split.w2 += w * arc;
    }
  }
  return split;
}

inline ObjectiveSplit split_objective(const Instance& inst, const FractionalSolution& sol) {
  return split_objective(inst, build_cycle_metric(inst.cycle), sol);
}

// Plain-text dump for cross-checking against third-party solvers: the
// objective, then one constraint per line as coefficient*variable terms.
inline std::string dump_lp(const LpModel& model) {
  std::ostringstream out;
  const auto format_lp_coeff = [](double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  const auto var_name = [&](int idx) {
    if (idx < model.n * model.h) return "x_" + std::to_string(idx / model.h + 1) + "_" +
                                        std::to_string(idx % model.h + 1);
    const int rel = idx - model.n * model.h;
    const int pair = rel / (model.h * model.h);
    const int ij = rel % (model.h * model.h);
    // invert pair_index by scanning; sizes here are small
    for (int p = 0; p < model.n; ++p)
      for (int q = p + 1; q < model.n; ++q)
        if (model.pair_index(p, q) == pair)
          return "y_" + std::to_string(p + 1) + "_" + std::to_string(ij / model.h + 1) + "_" +
                 std::to_string(q + 1) + "_" + std::to_string(ij % model.h + 1);
    return std::string("v_") + std::to_string(idx);
  };
  out << "min:";
  for (int j = 0; j < model.problem.num_vars; ++j)
    if (model.problem.objective[j] != 0.0)
      out << " + " << format_lp_coeff(model.problem.objective[j]) << " " << var_name(j);
  out << "\n";
  for (std::size_t r = 0; r < model.problem.rows.size(); ++r) {
    bool first = true;
    for (int j = 0; j < model.problem.num_vars; ++j) {
      const double a = model.problem.rows[r][j];
      if (a == 0.0) continue;
      out << (first ? "" : " + ") << format_lp_coeff(a) << " " << var_name(j);
      first = false;
    }
    out << " = " << format_lp_coeff(model.problem.rhs[r]) << "\n";
  }
  return out.str();
}

}  // namespace cyclestar
