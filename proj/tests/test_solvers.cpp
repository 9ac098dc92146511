#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cyclestar/solvers.hpp"
#include "test_support.hpp"

using namespace cyclestar;
using Catch::Matchers::WithinAbs;

namespace {

Instance two_node_instance() {
  Instance inst;
  inst.cycle.h = 3;
  inst.cycle.edge_lengths = {1.0, 1.0, 1.0};
  inst.n = 2;
  inst.spoke_costs = {{0.0, 5.0, 5.0}, {5.0, 5.0, 0.0}};
  inst.flows = {{0.0, 1.0}, {0.0, 0.0}};
  return inst;
}

}  // namespace

TEST_CASE("guarantee formulas") {
  CHECK_THAT(rounding_guarantee(3), WithinAbs(4.0 / 3.0, 1e-15));
  CHECK_THAT(rounding_guarantee(4), WithinAbs(1.5, 1e-15));
  CHECK_THAT(rounding_guarantee(5), WithinAbs(1.6, 1e-15));
  CHECK_THAT(combined_guarantee(4), WithinAbs(4.0 / 3.0, 1e-15));
  CHECK_THAT(combined_guarantee(5), WithinAbs(1.375, 1e-15));
}

TEST_CASE("exhaustive search on small instances") {
  Instance single;
  single.cycle.h = 3;
  single.cycle.edge_lengths = {1.0, 1.0, 1.0};
  single.n = 1;
  single.spoke_costs = {{3.0, 2.0, 1.0}};
  single.flows = {{0.0}};
  const ExactResult lone = exact_bruteforce(single);
  CHECK(lone.cost == 0.0);
  CHECK(lone.enumerated == 3);
  CHECK(lone.assignment.hub_of == std::vector<int>{0});  // lexicographic tie-break

  Instance zeroflow = generate_instance(4, 3, GenMode::general, 2);
  for (auto& row : zeroflow.flows)
    for (double& w : row) w = 0.0;
  const ExactResult zero = exact_bruteforce(zeroflow);
  CHECK(zero.cost == 0.0);
  CHECK(zero.assignment.hub_of == std::vector<int>{0, 0, 0});

  const ExactResult duo = exact_bruteforce(two_node_instance());
  CHECK_THAT(duo.cost, WithinAbs(1.0, 1e-12));
  CHECK(duo.assignment.hub_of == std::vector<int>{0, 2});
  CHECK(duo.enumerated == 9);
}

TEST_CASE("exhaustive search refuses to blow the budget") {
  const Instance big = generate_instance(5, 12, GenMode::general, 3);
  CHECK_THROWS_AS(exact_bruteforce(big), BudgetExceeded);
  CHECK_THROWS_AS(exact_bruteforce(two_node_instance(), 8), BudgetExceeded);
}

TEST_CASE("scaling all costs rescales optima without moving the argmin") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = generate_instance(4, 3, GenMode::general, rng.raw());
    const double lambda = 0.3 + 3.0 * rng.uniform();
    Instance scaled = inst;
    for (double& e : scaled.cycle.edge_lengths) e *= lambda;
    for (auto& row : scaled.spoke_costs)
      for (double& v : row) v *= lambda;
    const ExactResult base = exact_bruteforce(inst);
    const ExactResult after = exact_bruteforce(scaled);
    REQUIRE(after.assignment.hub_of == base.assignment.hub_of);
    REQUIRE_THAT(after.cost, WithinAbs(lambda * base.cost, 1e-9 * (1.0 + after.cost)));
  }
}

TEST_CASE("assumption check") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial)
    CHECK(check_assumption1(generate_instance(4, 3, GenMode::assumption1, rng.raw())));

  Instance bare = generate_instance(4, 2, GenMode::general, 5);
  for (auto& row : bare.spoke_costs)
    for (double& v : row) v = 0.0;
  CHECK_FALSE(check_assumption1(bare));  // 0 + 0 < c_ij

  Instance cheap;
  cheap.cycle.h = 3;
  cheap.cycle.edge_lengths = {1.0, 1.0, 1.0};
  cheap.n = 2;
  cheap.spoke_costs = {{1.0, 1.5, 2.0}, {1.0, 1.0, 1.0}};
  cheap.flows = {{0.0, 1.0}, {1.0, 0.0}};
  CHECK(check_assumption1(cheap));  // metric is at most 1, spokes at least 1
}

TEST_CASE("rounding solver reports a zero-cost optimum as ratio one") {
  Instance inst;
  inst.cycle.h = 3;
  inst.cycle.edge_lengths = {1.0, 1.0, 1.0};
  inst.n = 2;
  inst.spoke_costs = {{0.0, 9.0, 9.0}, {0.0, 9.0, 9.0}};  // both free at hub 1
  inst.flows = {{0.0, 1.0}, {2.0, 0.0}};
  const SolveReport report = algorithm4(inst);
  CHECK_THAT(report.cost, WithinAbs(0.0, 1e-9));
  CHECK_THAT(report.lp_value, WithinAbs(0.0, 1e-9));
  CHECK(report.ratio_vs_lp == 1.0);
  CHECK_THAT(*report.guarantee, WithinAbs(4.0 / 3.0, 1e-15));
  CHECK(report.method == "algorithm4");
}

TEST_CASE("rounding solver meets the ratio bound on a mini corpus") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const int h = 3 + static_cast<int>(rng.below(3));
    const int n = 3 + static_cast<int>(rng.below(2));
    const Instance inst = generate_instance(h, n, GenMode::general, rng.raw());
    SolveReport report = algorithm4(inst);
    const ExactResult exact = exact_bruteforce(inst);
    attach_exact(report, exact.cost);
    REQUIRE(report.lp_value <= exact.cost + 1e-9 * (1.0 + exact.cost));
    REQUIRE(exact.cost <= report.cost + 1e-9 * (1.0 + report.cost));
    REQUIRE(report.cost <= rounding_guarantee(h) * exact.cost + 1e-6);
    REQUIRE(*report.ratio_vs_exact >= 1.0 - 1e-9);
    // cost never beats the rounding-bound certificate from the LP split
    REQUIRE(report.cost <=
            report.w1 + rounding_guarantee(h) * report.w2 + 1e-9 * (1.0 + report.cost));
  }
}

TEST_CASE("derandomized rounding beats the average randomized run") {
  const Instance inst = generate_instance(4, 4, GenMode::general, 606);
  const LrpContext ctx = solve_lrp_context(inst);
  const SolveReport derand = algorithm4_with(inst, ctx, RoundingMode::derandomized, 0);
  const int seeds = 100;
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const SolveReport rand_run =
        algorithm4_with(inst, ctx, RoundingMode::randomized, mix_seed(404, s));
    REQUIRE(rand_run.method == "algorithm4-randomized");
    sum += rand_run.cost;
    sum_sq += rand_run.cost * rand_run.cost;
  }
  const double mean = sum / seeds;
  const double var = std::max(0.0, sum_sq / seeds - mean * mean);
  CHECK(derand.cost <= mean + 3.0 * std::sqrt(var / seeds) + 1e-9);
}

TEST_CASE("combined solver is exactly the better of its two ingredients") {
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const int h = 4 + static_cast<int>(rng.below(2));
    const Instance inst = generate_instance(h, 3, GenMode::assumption1, rng.raw());
    const LrpContext ctx = solve_lrp_context(inst);
    const SolveReport a4 = algorithm4_with(inst, ctx, RoundingMode::derandomized, 0);
    const Assignment ind = derandomize_independent(inst, ctx.metric, ctx.solution.fractional.x);
    const double ind_cost = evaluate_assignment(inst, ctx.metric, ind);
    const SolveReport both = combined(inst);
    REQUIRE(both.cost == std::min(a4.cost, ind_cost));
    REQUIRE_THAT(*both.guarantee, WithinAbs(combined_guarantee(h), 1e-15));
    REQUIRE(both.method == "combined");
  }
}

TEST_CASE("combined solver falls back to the rounding bound without the assumption") {
  Instance inst = generate_instance(5, 3, GenMode::general, 8);
  for (auto& row : inst.spoke_costs)
    for (double& v : row) v = 0.0;  // breaks the spoke triangle condition
  const SolveReport report = combined(inst);
  CHECK_THAT(*report.guarantee, WithinAbs(rounding_guarantee(5), 1e-15));
}

TEST_CASE("combined solver honors the improved ratio and its ingredients") {
  Rng rng(53);
  for (int trial = 0; trial < 40; ++trial) {
    const int h = 4 + static_cast<int>(rng.below(2));
    const int n = 3;
    const Instance inst = generate_instance(h, n, GenMode::assumption1, rng.raw());
    const LrpContext ctx = solve_lrp_context(inst);
    const SolveReport a4 = algorithm4_with(inst, ctx, RoundingMode::derandomized, 0);
    const Assignment ind = derandomize_independent(inst, ctx.metric, ctx.solution.fractional.x);
    const double ind_cost = evaluate_assignment(inst, ctx.metric, ind);
    const double w1 = ctx.split.w1, w2 = ctx.split.w2;
    const double scale = 1.0 + w1 + w2;
    REQUIRE(ind_cost <= 2.0 * w1 + w2 + 1e-9 * scale);
    REQUIRE(a4.cost <= w1 + rounding_guarantee(h) * w2 + 1e-9 * scale);
    const ExactResult exact = exact_bruteforce(inst);
    const SolveReport both = combined(inst);
    REQUIRE(both.cost <= combined_guarantee(h) * exact.cost + 1e-6);
  }
}

TEST_CASE("report chain lp <= exact <= cost on both generator modes") {
  Rng rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    const int h = 3 + static_cast<int>(rng.below(3));
    const int n = 2 + static_cast<int>(rng.below(3));
    const GenMode mode = trial % 2 == 0 ? GenMode::general : GenMode::assumption1;
    const Instance inst = generate_instance(h, n, mode, rng.raw());
    SolveReport report = combined(inst);
    const ExactResult exact = exact_bruteforce(inst);
    attach_exact(report, exact.cost);
    const double scale = 1.0 + exact.cost;
    REQUIRE(report.lp_value <= exact.cost + 1e-9 * scale);
    REQUIRE(exact.cost <= report.cost + 1e-9 * scale);
    REQUIRE(report.cost <= *report.guarantee * exact.cost + 1e-6);
  }
}
