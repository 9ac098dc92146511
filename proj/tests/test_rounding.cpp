#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "cyclestar/rounding.hpp"
#include "cyclestar/solvers.hpp"
#include "cyclestar/transport.hpp"
#include "test_support.hpp"

using namespace cyclestar;
using Catch::Matchers::WithinAbs;

namespace {

// Independent oracle for the joint rounding law: the Lebesgue measure of the
// thresholds sending p to hub i and q to hub j, from prefix intervals.
double interval_measure(const std::vector<double>& x_p, const std::vector<double>& x_q,
                        const std::vector<int>& order, int hub_i, int hub_j) {
  const auto prefix_p = stochastic_prefix(x_p, order);
  const auto prefix_q = stochastic_prefix(x_q, order);
  int pos_i = -1, pos_j = -1;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k] == hub_i) pos_i = static_cast<int>(k);
    if (order[k] == hub_j) pos_j = static_cast<int>(k);
  }
  const double lo_i = pos_i == 0 ? 0.0 : prefix_p[pos_i - 1];
  const double hi_i = prefix_p[pos_i];
  const double lo_j = pos_j == 0 ? 0.0 : prefix_q[pos_j - 1];
  const double hi_j = prefix_q[pos_j];
  return std::max(0.0, std::min(hi_i, hi_j) - std::max(lo_i, lo_j));
}

Matrix single_row(const std::vector<double>& row) { return Matrix{row}; }

}  // namespace

TEST_CASE("pi orders enumerate the cyclic shifts") {
  const auto orders4 = pi_orders(4);
  REQUIRE(orders4.size() == 4);
  CHECK(orders4[0] == std::vector<int>{1, 2, 3, 0});  // 1-based (2,3,4,1)
  const auto orders3 = pi_orders(3);
  REQUIRE(orders3.size() == 3);
  CHECK(orders3[0] == std::vector<int>{1, 2, 0});
  CHECK(orders3[1] == std::vector<int>{2, 0, 1});
  CHECK(orders3[2] == std::vector<int>{0, 1, 2});
  for (const auto& order : orders4) {
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1, 2, 3});
  }
}

TEST_CASE("dependent rounding follows the prefix rule") {
  const Matrix x = single_row({0.2, 0.1, 0.4, 0.3});
  const std::vector<int> order{1, 2, 3, 0};  // prefixes 0.1, 0.5, 0.8, 1
  CHECK(dependent_rounding(x, order, 0.05).assignment.hub_of[0] == 1);
  CHECK(dependent_rounding(x, order, 0.95).assignment.hub_of[0] == 0);
  CHECK(dependent_rounding(x, order, 0.1).assignment.hub_of[0] == 2);  // strict u < prefix
  CHECK(dependent_rounding(x, order, 0.75).assignment.hub_of[0] == 3);
}

TEST_CASE("dependent rounding of an integral matrix is the identity map") {
  Matrix x = make_matrix(3, 4);
  x[0][2] = 1.0;
  x[1][0] = 1.0;
  x[2][3] = 1.0;
  Rng rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const auto order = testsupport::random_permutation(rng, 4);
    const auto out = dependent_rounding(x, order, rng.uniform());
    CHECK(out.assignment.hub_of == std::vector<int>{2, 0, 3});
  }
}

TEST_CASE("seeded dependent rounding is reproducible") {
  Rng rng(27);
  Matrix x;
  for (int p = 0; p < 3; ++p) x.push_back(testsupport::random_stochastic_row(rng, 4));
  const auto order = testsupport::random_permutation(rng, 4);
  const auto a = dependent_rounding_seeded(x, order, 5);
  const auto b = dependent_rounding_seeded(x, order, 5);
  CHECK(a.assignment.hub_of == b.assignment.hub_of);
  CHECK(a.u_value == b.u_value);
  CHECK((a.u_value >= 0.0 && a.u_value < 1.0));
}

TEST_CASE("dependent rounding validates its input") {
  const Matrix x = single_row({0.5, 0.5});
  CHECK_THROWS_AS(dependent_rounding(x, {0, 1}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(dependent_rounding(x, {0, 1}, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(dependent_rounding(single_row({0.5, 0.6}), {0, 1}, 0.5),
                  std::invalid_argument);
}

TEST_CASE("breakpoints are the proper prefix sums") {
  const Matrix x = single_row({0.2, 0.1, 0.4, 0.3});
  const std::vector<int> order{1, 2, 3, 0};
  const auto cuts = breakpoints(x, order);
  REQUIRE(cuts.size() == 3);
  CHECK_THAT(cuts[0], WithinAbs(0.1, 1e-12));
  CHECK_THAT(cuts[1], WithinAbs(0.5, 1e-12));
  CHECK_THAT(cuts[2], WithinAbs(0.8, 1e-12));

  Matrix integral = make_matrix(2, 3);
  integral[0][1] = 1.0;
  integral[1][2] = 1.0;
  CHECK(breakpoints(integral, {0, 1, 2}).empty());

  Rng rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(5));
    const int h = 3 + static_cast<int>(rng.below(6));
    Matrix rows;
    for (int p = 0; p < n; ++p) rows.push_back(testsupport::random_stochastic_row(rng, h));
    const auto order = testsupport::random_permutation(rng, h);
    const auto pts = breakpoints(rows, order);
    CHECK(pts.size() <= static_cast<std::size_t>(n * (h - 1)));
    CHECK(std::is_sorted(pts.begin(), pts.end()));
    for (double v : pts) CHECK((v > 0.0 && v < 1.0));
  }
}

TEST_CASE("midpoint sweep enumerates exactly the reachable outcomes") {
  Rng rng(501);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3, h = 4;
    Matrix x;
    for (int p = 0; p < n; ++p) x.push_back(testsupport::random_stochastic_row(rng, h));
    const auto order = testsupport::random_permutation(rng, h);
    std::set<std::vector<int>> from_sweep;
    for (const auto& seg : sweep_outcomes(x, order))
      from_sweep.insert(seg.assignment.hub_of);
    std::set<std::vector<int>> from_draws;
    Rng draw_rng(rng.raw());
    for (int d = 0; d < 10000; ++d)
      from_draws.insert(dependent_rounding(x, order, draw_rng.uniform()).assignment.hub_of);
    REQUIRE(from_sweep == from_draws);
  }
}

TEST_CASE("empirical marginals match the fractional values") {
  // one shared threshold per draw across all nodes
  Rng rng(601);
  const int n = 3, h = 4, draws = 100000;
  Matrix x;
  for (int p = 0; p < n; ++p) x.push_back(testsupport::random_stochastic_row(rng, h));
  const auto order = testsupport::random_permutation(rng, h);
  Matrix counts = make_matrix(n, h);
  Rng draw_rng(99);
  for (int d = 0; d < draws; ++d) {
    const auto out = dependent_rounding(x, order, draw_rng.uniform());
    for (int p = 0; p < n; ++p) counts[p][out.assignment.hub_of[p]] += 1.0;
  }
  for (int p = 0; p < n; ++p) {
    for (int i = 0; i < h; ++i) {
      const double freq = counts[p][i] / draws;
      const double sigma = std::sqrt(x[p][i] * (1.0 - x[p][i]) / draws);
      if (x[p][i] == 0.0) {
        REQUIRE(freq == 0.0);
      } else {
        REQUIRE_THAT(freq, WithinAbs(x[p][i], 3.0 * sigma + 1e-12));
      }
    }
  }
}

TEST_CASE("joint law of one shared threshold is the staircase measure") {
  Rng rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const int h = 3 + static_cast<int>(rng.below(8));
    const auto x_p = testsupport::random_stochastic_row(rng, h);
    const auto x_q = testsupport::random_stochastic_row(rng, h);
    const auto order = testsupport::random_permutation(rng, h);
    const Matrix joint = nwcr_joint(x_p, x_q, order);
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < h; ++j)
        REQUIRE_THAT(interval_measure(x_p, x_q, order, i, j), WithinAbs(joint[i][j], 1e-12));
  }
}

TEST_CASE("empirical joint frequencies match the staircase matrix") {
  Rng rng(88);
  const int h = 4, draws = 100000;
  const auto x_p = testsupport::random_stochastic_row(rng, h, false);
  const auto x_q = testsupport::random_stochastic_row(rng, h, false);
  const auto order = testsupport::random_permutation(rng, h);
  const Matrix joint = nwcr_joint(x_p, x_q, order);
  const Matrix x{x_p, x_q};
  Matrix counts = make_matrix(h, h);
  Rng draw_rng(812);
  for (int d = 0; d < draws; ++d) {
    const auto out = dependent_rounding(x, order, draw_rng.uniform());
    counts[out.assignment.hub_of[0]][out.assignment.hub_of[1]] += 1.0;
  }
  int within = 0, entries = 0;
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < h; ++j) {
      const double y = joint[i][j];
      const double freq = counts[i][j] / draws;
      const double sigma = std::sqrt(y * (1.0 - y) / draws);
      ++entries;
      if (std::fabs(freq - y) <= 3.0 * sigma + 1e-12) ++within;
    }
  }
  // binomial 3-sigma bound per entry; all entries pass for this frozen seed
  CHECK(within == entries);
}

TEST_CASE("best sweep outcome never beats the segment average") {
  Rng rng(321);
  for (int trial = 0; trial < 20; ++trial) {
    const int h = 3 + static_cast<int>(rng.below(3));
    const int n = 2 + static_cast<int>(rng.below(3));
    const Instance inst = generate_instance(h, n, GenMode::general, rng.raw());
    const CycleMetric metric = build_cycle_metric(inst.cycle);
    Matrix x;
    for (int p = 0; p < n; ++p) x.push_back(testsupport::random_stochastic_row(rng, h));
    const auto order = testsupport::random_permutation(rng, h);
    double best = 0.0, mean = 0.0;
    bool first = true;
    for (const auto& seg : sweep_outcomes(x, order)) {
      const double cost = evaluate_assignment(inst, metric, seg.assignment);
      mean += (seg.u_hi - seg.u_lo) * cost;
      if (first || cost < best) best = cost;
      first = false;
    }
    REQUIRE(best <= mean + 1e-9);
  }
}

TEST_CASE("independent rounding is deterministic per seed and integral-faithful") {
  Matrix integral = make_matrix(3, 4);
  integral[0][1] = 1.0;
  integral[1][3] = 1.0;
  integral[2][0] = 1.0;
  for (std::uint64_t seed : {1ULL, 9ULL, 77ULL})
    CHECK(independent_rounding(integral, seed).hub_of == std::vector<int>{1, 3, 0});

  Rng rng(41);
  Matrix x;
  for (int p = 0; p < 4; ++p) x.push_back(testsupport::random_stochastic_row(rng, 5));
  CHECK(independent_rounding(x, 123).hub_of == independent_rounding(x, 123).hub_of);
}

TEST_CASE("independent rounding hits uniform frequencies") {
  const int h = 4, draws = 100000;
  const Matrix x = single_row(std::vector<double>(h, 1.0 / h));
  std::vector<int> counts(h, 0);
  for (int d = 0; d < draws; ++d)
    ++counts[independent_rounding(x, 1000 + static_cast<std::uint64_t>(d)).hub_of[0]];
  const double sigma = std::sqrt((1.0 / h) * (1.0 - 1.0 / h) / draws);
  for (int i = 0; i < h; ++i)
    REQUIRE_THAT(counts[i] / static_cast<double>(draws), WithinAbs(1.0 / h, 3.0 * sigma));
}

TEST_CASE("expected independent cost in closed form") {
  const Instance inst = generate_instance(4, 3, GenMode::general, 7);
  Matrix integral = make_matrix(3, 4);
  integral[0][2] = 1.0;
  integral[1][1] = 1.0;
  integral[2][3] = 1.0;
  CHECK_THAT(expected_independent_cost(inst, integral),
             WithinAbs(evaluate_assignment(inst, Assignment{{2, 1, 3}}), 1e-12));

  Instance zeroflow = inst;
  for (auto& row : zeroflow.flows)
    for (double& w : row) w = 0.0;
  CHECK(expected_independent_cost(zeroflow, integral) == 0.0);
}

TEST_CASE("expected independent cost matches Monte Carlo") {
  Rng rng(55);
  const Instance inst = generate_instance(4, 3, GenMode::general, 11);
  Matrix x;
  for (int p = 0; p < 3; ++p) x.push_back(testsupport::random_stochastic_row(rng, 4));
  const double expected = expected_independent_cost(inst, x);
  const int draws = 10000;
  double sum = 0.0, sum_sq = 0.0;
  for (int d = 0; d < draws; ++d) {
    const double cost =
        evaluate_assignment(inst, independent_rounding(x, mix_seed(202, d)));
    sum += cost;
    sum_sq += cost * cost;
  }
  const double mean = sum / draws;
  const double variance = std::max(0.0, sum_sq / draws - mean * mean);
  const double stderr_mean = std::sqrt(variance / draws);
  REQUIRE_THAT(mean, WithinAbs(expected, 3.0 * stderr_mean + 1e-9));
}

TEST_CASE("conditional-expectation rounding never exceeds the expectation") {
  Rng rng(66);
  for (int trial = 0; trial < 30; ++trial) {
    const int h = 3 + static_cast<int>(rng.below(3));
    const int n = 2 + static_cast<int>(rng.below(3));
    const Instance inst = generate_instance(h, n, GenMode::general, rng.raw());
    const CycleMetric metric = build_cycle_metric(inst.cycle);
    Matrix x;
    for (int p = 0; p < n; ++p) x.push_back(testsupport::random_stochastic_row(rng, h));
    const Assignment a = derandomize_independent(inst, metric, x);
    const double cost = evaluate_assignment(inst, metric, a);
    REQUIRE(cost <= expected_independent_cost(inst, metric, x) + 1e-9);
    const ExactResult exact = exact_bruteforce(inst);
    REQUIRE(cost >= exact.cost - 1e-9);
  }
}

TEST_CASE("conditional-expectation rounding can only improve integral input") {
  // A strictly suboptimal integral input may legitimately move to a cheaper
  // hub; the unique optimum is a fixed point.
  Instance inst;
  inst.cycle.h = 3;
  inst.cycle.edge_lengths = {1.0, 1.0, 1.0};
  inst.n = 2;
  inst.spoke_costs = {{0.0, 5.0, 5.0}, {5.0, 5.0, 0.0}};
  inst.flows = {{0.0, 1.0}, {0.0, 0.0}};
  Matrix optimal = make_matrix(2, 3);
  optimal[0][0] = 1.0;
  optimal[1][2] = 1.0;
  CHECK(derandomize_independent(inst, optimal).hub_of == std::vector<int>{0, 2});

  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance random_inst = generate_instance(4, 3, GenMode::general, rng.raw());
    Matrix integral = make_matrix(3, 4);
    Assignment original;
    original.hub_of.resize(3);
    for (int p = 0; p < 3; ++p) {
      original.hub_of[p] = static_cast<int>(rng.below(4));
      integral[p][original.hub_of[p]] = 1.0;
    }
    const Assignment rounded = derandomize_independent(random_inst, integral);
    REQUIRE(evaluate_assignment(random_inst, rounded) <=
            evaluate_assignment(random_inst, original) + 1e-12);
  }
}
