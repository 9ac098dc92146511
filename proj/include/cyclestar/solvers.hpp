#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclestar/instance.hpp"
#include "cyclestar/lp_relaxation.hpp"
#include "cyclestar/monge.hpp"
#include "cyclestar/rounding.hpp"

namespace cyclestar {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integral solution with its audit trail against the LP and (optionally) the
// exact optimum.
struct SolveReport {
  Assignment assignment;
  double cost = 0.0;
  double lp_value = 0.0;
  double w1 = 0.0;
  double w2 = 0.0;
  std::optional<double> exact_cost;
  double ratio_vs_lp = 1.0;
  std::optional<double> ratio_vs_exact;
  std::optional<double> guarantee;  // absent when no bound applies
  std::string method;
  std::uint64_t seed = 0;
  double wall_time = 0.0;  // seconds, informational
};

enum class RoundingMode { derandomized, randomized };

// One LP solve shared by every rounding pass on the same instance.
struct LrpContext {
  CycleMetric metric;
  LpModel model;
  LrpSolution solution;
  ObjectiveSplit split;
};

inline double rounding_guarantee(int h) { return 2.0 * (1.0 - 1.0 / h); }

// Ratio for the combined algorithm; requires the spoke-triangle condition.
inline double combined_guarantee(int h) { return 1.5 - 1.0 / (2.0 * (h - 1)); }

inline double safe_ratio(double numerator, double denominator) {
  if (denominator > 0.0) return numerator / denominator;
  return numerator <= 1e-9 ? 1.0 : std::numeric_limits<double>::infinity();
}

inline LrpContext solve_lrp_context(const Instance& inst) {
  LrpContext ctx;
  ctx.metric = build_cycle_metric(inst.cycle);
  ctx.model = build_lrp(inst, ctx.metric);
  ctx.solution = solve_lp(ctx.model);
  ctx.split = split_objective(inst, ctx.metric, ctx.solution.fractional);
  return ctx;
}

// True iff c_ij <= c_pi + c_pj for every hub pair and non-hub (the hub-hub
// triangle inequality holds for any cycle metric by construction).
inline bool check_assumption1(const Instance& inst, const CycleMetric& metric,
                              double tol = 1e-12) {
  for (int p = 0; p < inst.n; ++p)
    for (int i = 0; i < inst.cycle.h; ++i)
      for (int j = 0; j < inst.cycle.h; ++j)
        if (metric(i, j) > inst.spoke_costs[p][i] + inst.spoke_costs[p][j] + tol) return false;
  return true;
}

inline bool check_assumption1(const Instance& inst) {
  return check_assumption1(inst, build_cycle_metric(inst.cycle));
}

struct ExactResult {
  Assignment assignment;
  double cost = 0.0;
  std::uint64_t enumerated = 0;
};

// Exhaustive enumeration of all h^n assignments in lexicographic order,
// keeping the first (hence lexicographically smallest) optimum. Refuses to
// start when h^n exceeds the budget.
inline ExactResult exact_bruteforce(const Instance& inst, std::uint64_t budget = 10000000) {
  const int n = inst.n;
  const int h = inst.cycle.h;
  std::uint64_t count = 1;
  for (int p = 0; p < n; ++p) {
    if (count > budget / static_cast<std::uint64_t>(h))
      throw BudgetExceeded("exact enumeration would exceed the assignment budget of " +
                           std::to_string(budget));
    count *= static_cast<std::uint64_t>(h);
  }
  const CycleMetric metric = build_cycle_metric(inst.cycle);
  ExactResult best;
  Assignment a;
  a.hub_of.assign(n, 0);
  best.assignment = a;
  best.cost = evaluate_assignment(inst, metric, a);
  best.enumerated = 1;
  for (;;) {
    int pos = n - 1;
    while (pos >= 0 && a.hub_of[pos] == h - 1) {
      a.hub_of[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++a.hub_of[pos];
    ++best.enumerated;
    const double cost = evaluate_assignment(inst, metric, a);
    if (cost < best.cost) {
      best.cost = cost;
      best.assignment = a;
    }
  }
  return best;
}

namespace detail {

inline bool lexicographically_before(const Assignment& a, const Assignment& b) {
  return a.hub_of < b.hub_of;
}

// Tracks the cheapest candidate; exact cost ties go to the lexicographically
// smaller assignment so every mode is reproducible.
struct BestCandidate {
  bool has = false;
  double cost = 0.0;
  Assignment assignment;

  void offer(double c, const Assignment& a) {
    if (!has || c < cost || (c == cost && lexicographically_before(a, assignment))) {
      has = true;
      cost = c;
      assignment = a;
    }
  }
};

}  // namespace detail

// LP-rounding approximation: solve the relaxation once, round with every
// cyclic order, keep the best candidate. Derandomized mode sweeps all
// threshold segments per order; randomized mode draws one threshold per
// order from `seed`.
inline SolveReport algorithm4_with(const Instance& inst, const LrpContext& ctx,
                                   RoundingMode mode = RoundingMode::derandomized,
                                   std::uint64_t seed = 0) {
  const auto start = std::chrono::steady_clock::now();
  const int h = inst.cycle.h;
  detail::BestCandidate best;
  Rng rng(seed);
  for (const auto& order : pi_orders(h)) {
    if (mode == RoundingMode::derandomized) {
      for (const auto& seg : sweep_outcomes(ctx.solution.fractional.x, order))
        best.offer(evaluate_assignment(inst, ctx.metric, seg.assignment), seg.assignment);
    } else {
      const double u = rng.uniform();
      const auto outcome = dependent_rounding(ctx.solution.fractional.x, order, u);
      best.offer(evaluate_assignment(inst, ctx.metric, outcome.assignment), outcome.assignment);
    }
  }
  SolveReport report;
  report.assignment = best.assignment;
  report.cost = best.cost;
  report.lp_value = ctx.solution.value;
  report.w1 = ctx.split.w1;
  report.w2 = ctx.split.w2;
  report.ratio_vs_lp = safe_ratio(report.cost, report.lp_value);
  report.guarantee = rounding_guarantee(h);
  report.method = mode == RoundingMode::derandomized ? "algorithm4" : "algorithm4-randomized";
  report.seed = seed;
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

inline SolveReport algorithm4(const Instance& inst,
                              RoundingMode mode = RoundingMode::derandomized,
                              std::uint64_t seed = 0) {
  const auto start = std::chrono::steady_clock::now();
  const LrpContext ctx = solve_lrp_context(inst);
  SolveReport report = algorithm4_with(inst, ctx, mode, seed);
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// Conditional-expectation rounding of the LP solution, reported standalone.
inline SolveReport independent_report(const Instance& inst, const LrpContext& ctx) {
  const auto start = std::chrono::steady_clock::now();
  const Assignment a = derandomize_independent(inst, ctx.metric, ctx.solution.fractional.x);
  SolveReport report;
  report.assignment = a;
  report.cost = evaluate_assignment(inst, ctx.metric, a);
  report.lp_value = ctx.solution.value;
  report.w1 = ctx.split.w1;
  report.w2 = ctx.split.w2;
  report.ratio_vs_lp = safe_ratio(report.cost, report.lp_value);
  // 2-approximation under the spoke-triangle condition; no bound otherwise.
  if (check_assumption1(inst, ctx.metric)) report.guarantee = 2.0;
  report.method = "independent";
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

inline SolveReport independent_report(const Instance& inst) {
  return independent_report(inst, solve_lrp_context(inst));
}

// Better of the rounding-with-orders solution and the conditional-expectation
// solution, sharing one LP solve. The improved ratio applies only when the
// spoke-triangle condition holds; otherwise the rounding bound is reported.
inline SolveReport combined(const Instance& inst) {
  const auto start = std::chrono::steady_clock::now();
  const LrpContext ctx = solve_lrp_context(inst);
  SolveReport a4 = algorithm4_with(inst, ctx, RoundingMode::derandomized, 0);
  const Assignment ind = derandomize_independent(inst, ctx.metric, ctx.solution.fractional.x);
  const double ind_cost = evaluate_assignment(inst, ctx.metric, ind);
  detail::BestCandidate best;
  best.offer(a4.cost, a4.assignment);
  best.offer(ind_cost, ind);
  SolveReport report;
  report.assignment = best.assignment;
  report.cost = best.cost;
  report.lp_value = ctx.solution.value;
  report.w1 = ctx.split.w1;
  report.w2 = ctx.split.w2;
  report.ratio_vs_lp = safe_ratio(report.cost, report.lp_value);
  report.guarantee = check_assumption1(inst, ctx.metric) ? combined_guarantee(inst.cycle.h)
                                                         : rounding_guarantee(inst.cycle.h);
  report.method = "combined";
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

inline void attach_exact(SolveReport& report, double exact_cost) {
  report.exact_cost = exact_cost;
  report.ratio_vs_exact = safe_ratio(report.cost, exact_cost);
}

}  // namespace cyclestar
