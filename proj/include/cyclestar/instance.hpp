#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclestar/rng.hpp"

namespace cyclestar {

using Matrix = std::vector<std::vector<double>>;

inline Matrix make_matrix(int rows, int cols, double fill = 0.0) {
  return Matrix(static_cast<std::size_t>(rows),
                std::vector<double>(static_cast<std::size_t>(cols), fill));
}

// Hubs sit on an undirected cycle. Hub and edge indices are 0-based in code
// and 1-based in every file format and report; edge k joins hubs k and
// (k+1) mod h.
struct HubCycle {
  int h = 0;
  std::vector<double> edge_lengths;

  double total_length() const {
    double total = 0.0;
    for (double c : edge_lengths) total += c;
    return total;
  }
};

struct Instance {
  HubCycle cycle;
  int n = 0;
  Matrix spoke_costs;  // n x h
  Matrix flows;        // n x n, zero diagonal
};

// Hub-to-hub shortest-path distances on the cycle.
struct CycleMetric {
  Matrix values;

  int size() const { return static_cast<int>(values.size()); }
  double operator()(int i, int j) const { return values[i][j]; }
};

struct Assignment {
  std::vector<int> hub_of;  // hub index per non-hub
};

enum class GenMode { general, assumption1 };

inline std::string to_string(GenMode mode) {
  return mode == GenMode::general ? "general" : "assumption1";
}

inline GenMode gen_mode_from_string(const std::string& s) {
  if (s == "general") return GenMode::general;
  if (s == "assumption1") return GenMode::assumption1;
  throw std::invalid_argument("unknown mode '" + s + "' (expected general or assumption1)");
}

// Length of the arc from i to j through ascending hub indices
// (edges i, i+1, ..., j-1 mod h). The reverse arc is clockwise_length(j, i);
// summing both arcs as explicit edge runs keeps c_ij == c_ji bit-exact.
inline double clockwise_length(const HubCycle& cycle, int i, int j) {
  double len = 0.0;
  for (int k = i; k != j; k = (k + 1) % cycle.h) len += cycle.edge_lengths[k];
  return len;
}

inline CycleMetric build_cycle_metric(const HubCycle& cycle) {
  const int h = cycle.h;
  CycleMetric metric{make_matrix(h, h)};
  for (int i = 0; i < h; ++i) {
    for (int j = i + 1; j < h; ++j) {
      const double cw = clockwise_length(cycle, i, j);
      const double ccw = clockwise_length(cycle, j, i);
      const double d = cw <= ccw ? cw : ccw;
      metric.values[i][j] = d;
      metric.values[j][i] = d;
    }
  }
  return metric;
}

// Edge set of a shortest arc between i and j; exact ties resolve to the
// ascending (clockwise) arc. i == j yields the empty set.
inline std::vector<int> shortest_path_edges(const HubCycle& cycle, int i, int j) {
  std::vector<int> edges;
  if (i == j) return edges;
  const double cw = clockwise_length(cycle, i, j);
  const double ccw = clockwise_length(cycle, j, i);
  const int from = cw <= ccw ? i : j;
  const int to = cw <= ccw ? j : i;
  for (int k = from; k != to; k = (k + 1) % cycle.h) edges.push_back(k);
  std::sort(edges.begin(), edges.end());
  return edges;
}

// Total transportation cost of an integral assignment: the sum over ordered
// pairs p != q of w_pq * (c_{p,a(p)} + c_{a(p)a(q)} + c_{q,a(q)}).
inline double evaluate_assignment(const Instance& inst, const CycleMetric& metric,
                                  const Assignment& a) {
  const int n = inst.n;
  const int h = inst.cycle.h;
  if (static_cast<int>(a.hub_of.size()) != n)
    throw std::invalid_argument("assignment size does not match instance");
  for (int hub : a.hub_of)
    if (hub < 0 || hub >= h) throw std::invalid_argument("assignment hub index out of range");
  double total = 0.0;
  for (int p = 0; p < n; ++p) {
    const int ap = a.hub_of[p];
    for (int q = 0; q < n; ++q) {
      if (q == p) continue;
      const double w = inst.flows[p][q];
      if (w == 0.0) continue;
      const int aq = a.hub_of[q];
      total += w * (inst.spoke_costs[p][ap] + metric(ap, aq) + inst.spoke_costs[q][aq]);
    }
  }
  return total;
}

inline double evaluate_assignment(const Instance& inst, const Assignment& a) {
  return evaluate_assignment(inst, build_cycle_metric(inst.cycle), a);
}

// Lists every violated invariant; empty report iff the instance is valid.
inline std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> report;
  const int h = inst.cycle.h;
  const int n = inst.n;
  if (h < 3) report.push_back("h >= 3 required, got " + std::to_string(h));
  if (static_cast<int>(inst.cycle.edge_lengths.size()) != h)
    report.push_back("edge_lengths dimension mismatch: expected " + std::to_string(h) +
                     " entries, got " + std::to_string(inst.cycle.edge_lengths.size()));
  for (std::size_t k = 0; k < inst.cycle.edge_lengths.size(); ++k) {
    const double c = inst.cycle.edge_lengths[k];
    if (!std::isfinite(c))
      report.push_back("non-finite edge length at edge " + std::to_string(k + 1));
    else if (c < 0.0)
      report.push_back("negative edge length at edge " + std::to_string(k + 1));
  }
  if (n < 1) report.push_back("n >= 1 required, got " + std::to_string(n));
  if (static_cast<int>(inst.spoke_costs.size()) != n)
    report.push_back("spoke_costs dimension mismatch: expected " + std::to_string(n) + " rows");
  for (std::size_t p = 0; p < inst.spoke_costs.size(); ++p) {
    if (static_cast<int>(inst.spoke_costs[p].size()) != h) {
      report.push_back("spoke_costs dimension mismatch in row " + std::to_string(p + 1));
      continue;
    }
    for (int i = 0; i < h; ++i) {
      const double c = inst.spoke_costs[p][i];
      if (!std::isfinite(c))
        report.push_back("non-finite spoke cost at (" + std::to_string(p + 1) + "," +
                         std::to_string(i + 1) + ")");
      else if (c < 0.0)
        report.push_back("negative spoke cost at (" + std::to_string(p + 1) + "," +
                         std::to_string(i + 1) + ")");
    }
  }
  if (static_cast<int>(inst.flows.size()) != n)
    report.push_back("flows dimension mismatch: expected " + std::to_string(n) + " rows");
  for (std::size_t p = 0; p < inst.flows.size(); ++p) {
    if (static_cast<int>(inst.flows[p].size()) != n) {
      report.push_back("flows dimension mismatch in row " + std::to_string(p + 1));
      continue;
    }
    for (int q = 0; q < n; ++q) {
      const double w = inst.flows[p][q];
      if (!std::isfinite(w))
        report.push_back("non-finite flow at (" + std::to_string(p + 1) + "," +
                         std::to_string(q + 1) + ")");
      else if (w < 0.0)
        report.push_back("negative flow at (" + std::to_string(p + 1) + "," +
                         std::to_string(q + 1) + ")");
      else if (static_cast<int>(p) == q && w != 0.0)
        report.push_back("nonzero flow diagonal at " + std::to_string(p + 1));
    }
  }
  return report;
}

// Deterministic per seed. Draw order: edge lengths, spoke costs (general) or
// per-node anchor hub and offset (assumption1), then flows row by row with no
// draw consumed on the diagonal.
//
// assumption1 mode builds c_pi = c_{a_p,i} + r_p for a random anchor hub a_p,
// so c_pi + c_pj = c_{a_p,i} + c_{a_p,j} + 2 r_p >= c_ij by the cycle
// metric's triangle inequality.
inline Instance generate_instance(int h, int n, GenMode mode, std::uint64_t seed) {
  if (h < 3) throw std::invalid_argument("generate_instance: h >= 3 required");
  if (n < 1) throw std::invalid_argument("generate_instance: n >= 1 required");
  Rng rng(seed);
  Instance inst;
  inst.cycle.h = h;
  inst.cycle.edge_lengths.resize(h);
  for (int k = 0; k < h; ++k) inst.cycle.edge_lengths[k] = rng.uniform();
  inst.n = n;
  inst.spoke_costs = make_matrix(n, h);
  if (mode == GenMode::general) {
    for (int p = 0; p < n; ++p)
      for (int i = 0; i < h; ++i) inst.spoke_costs[p][i] = rng.uniform();
  } else {
    const CycleMetric metric = build_cycle_metric(inst.cycle);
    for (int p = 0; p < n; ++p) {
      const int anchor = static_cast<int>(rng.below(static_cast<std::uint64_t>(h)));
      const double offset = rng.uniform();
      for (int i = 0; i < h; ++i) inst.spoke_costs[p][i] = metric(anchor, i) + offset;
    }
  }
  inst.flows = make_matrix(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (q != p) inst.flows[p][q] = rng.uniform();
  return inst;
}

}  // namespace cyclestar
