#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cyclestar/instance.hpp"
#include "cyclestar/io.hpp"
#include "cyclestar/monge.hpp"
#include "cyclestar/rounding.hpp"
#include "cyclestar/solvers.hpp"
#include "cyclestar/transport.hpp"
#include "json.hpp"

namespace cyclestar {

// Grid experiment: every (h, n) cell gets `instances_per_cell` generated
// instances, each solved with every listed method.
struct ExperimentConfig {
  std::vector<int> hubs;
  std::vector<int> nonhubs;
  int instances_per_cell = 1;
  GenMode mode = GenMode::general;
  std::uint64_t seed = 0;
  std::vector<std::string> methods;
  std::string output_path;
  std::uint64_t exact_budget = 10000000;
};

// One result line. wall_time stays off the wire: serialized rows must be
// byte-identical across re-runs with the same seed.
struct ExperimentRow {
  int h = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::string method;
  std::optional<double> cost;
  std::optional<double> lp_value;
  std::optional<double> exact_cost;
  std::optional<double> ratio_vs_exact;
  std::optional<double> guarantee;
  std::optional<bool> within_guarantee;
  std::optional<std::string> error;
  double wall_time = 0.0;

  std::string to_json() const;
};

namespace detail {

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

inline std::string ExperimentRow::to_json() const {
  std::string out = "{";
  out += "\"h\": " + std::to_string(h);
  out += ", \"n\": " + std::to_string(n);
  out += ", \"seed\": " + std::to_string(seed);
  out += ", \"method\": \"" + detail::json_escape(method) + "\"";
  const auto field = [&out](const char* name, const std::optional<double>& v) {
    if (v) out += std::string(", \"") + name + "\": " + format_decimal(*v);
  };
  field("cost", cost);
  field("lp_value", lp_value);
  field("exact_cost", exact_cost);
  field("ratio_vs_exact", ratio_vs_exact);
  field("guarantee", guarantee);
  if (within_guarantee)
    out += std::string(", \"within_guarantee\": ") + (*within_guarantee ? "true" : "false");
  if (error) out += ", \"error\": \"" + detail::json_escape(*error) + "\"";
  out += "}";
  return out;
}

inline const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> methods{"exact", "lp", "algorithm4", "independent",
                                                "combined"};
  return methods;
}

// Solves one instance with one method and audits it against the exact
// optimum whenever the enumeration budget allows.
inline ExperimentRow solve_row(const Instance& inst, const std::string& method,
                               std::uint64_t seed, std::uint64_t exact_budget = 10000000) {
  ExperimentRow row;
  row.h = inst.cycle.h;
  row.n = inst.n;
  row.seed = seed;
  row.method = method;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (method == "exact") {
      const ExactResult exact = exact_bruteforce(inst, exact_budget);
      row.cost = exact.cost;
      row.exact_cost = exact.cost;
      row.ratio_vs_exact = 1.0;
      row.guarantee = 1.0;
      row.within_guarantee = true;
    } else if (method == "lp") {
      row.lp_value = solve_lp(build_lrp(inst)).value;
    } else {
      SolveReport report;
      if (method == "algorithm4") {
        report = algorithm4(inst);
      } else if (method == "independent") {
        report = independent_report(inst);
      } else if (method == "combined") {
        report = combined(inst);
      } else {
        throw std::invalid_argument("unknown method '" + method + "'");
      }
      row.cost = report.cost;
      row.lp_value = report.lp_value;
      row.guarantee = report.guarantee;
      try {
        const ExactResult exact = exact_bruteforce(inst, exact_budget);
        row.exact_cost = exact.cost;
        row.ratio_vs_exact = safe_ratio(report.cost, exact.cost);
        if (row.guarantee) row.within_guarantee = *row.ratio_vs_exact <= *row.guarantee + 1e-6;
      } catch (const BudgetExceeded&) {
        // no audit fields when enumeration is out of reach
      }
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  row.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

inline ExperimentConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  const auto ints = [&j](const char* name) {
    if (!j.contains(name)) throw std::runtime_error(std::string("config missing '") + name + "'");
    return j.at(name).get<std::vector<int>>();
  };
  cfg.hubs = ints("hubs");
  cfg.nonhubs = ints("nonhubs");
  if (!j.contains("instances")) throw std::runtime_error("config missing 'instances'");
  cfg.instances_per_cell = j.at("instances").get<int>();
  cfg.mode = gen_mode_from_string(j.value("mode", "general"));
  cfg.seed = j.value("seed", 0ULL);
  if (!j.contains("methods")) throw std::runtime_error("config missing 'methods'");
  cfg.methods = j.at("methods").get<std::vector<std::string>>();
  if (!j.contains("output")) throw std::runtime_error("config missing 'output'");
  cfg.output_path = j.at("output").get<std::string>();
  if (j.contains("exact_budget")) cfg.exact_budget = j.at("exact_budget").get<std::uint64_t>();

  for (int h : cfg.hubs)
    if (h < 3) throw std::runtime_error("config: every hub count must be >= 3");
  for (int n : cfg.nonhubs)
    if (n < 1) throw std::runtime_error("config: every non-hub count must be >= 1");
  if (cfg.instances_per_cell < 1) throw std::runtime_error("config: instances must be >= 1");
  if (cfg.methods.empty()) throw std::runtime_error("config: methods must be non-empty");
  for (const auto& m : cfg.methods) {
    const auto& known = known_methods();
    if (std::find(known.begin(), known.end(), m) == known.end())
      throw std::runtime_error("config: unknown method '" + m + "'");
  }
  if (cfg.output_path.empty()) throw std::runtime_error("config: output path must be non-empty");
  return cfg;
}

struct BenchSummary {
  std::size_t rows = 0;
  std::size_t violations = 0;
  std::size_t errors = 0;
};

// Runs the grid with a worker pool over (cell, instance) tasks. Each task's
// generator seed is derived from (config seed, task index), so row content is
// independent of scheduling; rows are emitted in (cell, instance, method)
// order.
inline BenchSummary run_bench(const ExperimentConfig& cfg, std::ostream& rows_out,
                              std::ostream& summary_out) {
  struct Task {
    int h;
    int n;
    std::uint64_t instance_seed;
  };
  std::vector<Task> tasks;
  std::uint64_t stream = 0;
  for (int h : cfg.hubs)
    for (int n : cfg.nonhubs)
      for (int k = 0; k < cfg.instances_per_cell; ++k)
        tasks.push_back({h, n, mix_seed(cfg.seed, stream++)});

  std::vector<std::vector<ExperimentRow>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const Task& task = tasks[t];
      const Instance inst = generate_instance(task.h, task.n, cfg.mode, task.instance_seed);
      for (const auto& method : cfg.methods)
        results[t].push_back(solve_row(inst, method, task.instance_seed, cfg.exact_budget));
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t pool = std::min<std::size_t>(hw, tasks.size());
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w + 1 < pool; ++w) threads.emplace_back(worker);
  worker();
  for (auto& th : threads) th.join();

  BenchSummary summary;
  struct Cell {
    double max_ratio = 0.0;
    double min_guarantee = 0.0;
    double min_margin = 0.0;
    bool any = false;
  };
  std::map<std::pair<int, std::string>, Cell> table;
  for (const auto& batch : results) {
    for (const auto& row : batch) {
      rows_out << row.to_json() << "\n";
      ++summary.rows;
      if (row.error) ++summary.errors;
      if (row.within_guarantee && !*row.within_guarantee) ++summary.violations;
      if (row.ratio_vs_exact && row.guarantee) {
        Cell& cell = table[{row.h, row.method}];
        const double margin = *row.guarantee - *row.ratio_vs_exact;
        if (!cell.any) {
          cell = {*row.ratio_vs_exact, *row.guarantee, margin, true};
        } else {
          cell.max_ratio = std::max(cell.max_ratio, *row.ratio_vs_exact);
          cell.min_guarantee = std::min(cell.min_guarantee, *row.guarantee);
          cell.min_margin = std::min(cell.min_margin, margin);
        }
      }
    }
  }

  summary_out << std::left << std::setw(6) << "h" << std::setw(14) << "method"
              << std::setw(12) << "max_ratio" << std::setw(12) << "guarantee"
              << std::setw(12) << "margin" << "\n";
  for (const auto& [key, cell] : table) {
    std::ostringstream ratio, guar, margin;
    ratio << std::fixed << std::setprecision(6) << cell.max_ratio;
    guar << std::fixed << std::setprecision(6) << cell.min_guarantee;
    margin << std::fixed << std::setprecision(6) << cell.min_margin;
    summary_out << std::left << std::setw(6) << key.first << std::setw(14) << key.second
                << std::setw(12) << ratio.str() << std::setw(12) << guar.str()
                << std::setw(12) << margin.str() << "\n";
  }
  summary_out << "rows=" << summary.rows << " violations=" << summary.violations
              << " errors=" << summary.errors << "\n";
  return summary;
}

// ---------------------------------------------------------------------------
// Theorem verification suites (the `verify` command)
// ---------------------------------------------------------------------------

struct SuiteResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  double worst = 0.0;  // largest observed slack violation (<= 0 when clean)
};

namespace detail {

inline std::vector<double> random_stochastic_row(Rng& rng, int h) {
  std::vector<double> row(h, 0.0);
  double sum = 0.0;
  for (double& v : row) {
    if (rng.uniform() < 0.25) continue;  // keep some zero entries
    v = rng.uniform();
    sum += v;
  }
  if (sum == 0.0) {
    row[static_cast<std::size_t>(rng.below(h))] = 1.0;
    sum = 1.0;
  }
  for (double& v : row) v /= sum;
  return row;
}

inline std::vector<int> random_permutation(Rng& rng, int h) {
  std::vector<int> perm(h);
  for (int i = 0; i < h; ++i) perm[i] = i;
  for (int i = h - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

inline HubCycle random_cycle(Rng& rng, int hubs_min, int hubs_max) {
  HubCycle cycle;
  cycle.h = hubs_min + static_cast<int>(rng.below(hubs_max - hubs_min + 1));
  cycle.edge_lengths.resize(cycle.h);
  for (double& e : cycle.edge_lengths) e = rng.uniform();
  return cycle;
}

// Threshold measure of {u : p -> i and q -> j} from prefix intervals; the
// executable form of the joint-law statement checked against nwcr_joint.
inline double interval_measure(const std::vector<double>& x_p, const std::vector<double>& x_q,
                               const std::vector<int>& order, int pos_i, int pos_j) {
  const auto prefix_p = stochastic_prefix(x_p, order);
  const auto prefix_q = stochastic_prefix(x_q, order);
  const double lo_i = pos_i == 0 ? 0.0 : prefix_p[pos_i - 1];
  const double lo_j = pos_j == 0 ? 0.0 : prefix_q[pos_j - 1];
  const double hi_i = prefix_p[pos_i];
  const double hi_j = prefix_q[pos_j];
  return std::max(0.0, std::min(hi_i, hi_j) - std::max(lo_i, lo_j));
}

}  // namespace detail

// Batch checks of the structural results behind the approximation ratio.
// `inject_fault` perturbs the first suite's matrices so the harness itself
// can be shown to detect violations.
inline std::vector<SuiteResult> run_verify(int hubs_min, int hubs_max, int trials,
                                           std::uint64_t seed, bool inject_fault = false) {
  if (hubs_min < 3) throw std::invalid_argument("verify: hubs-min must be >= 3");
  if (hubs_max < hubs_min) throw std::invalid_argument("verify: hubs-max must be >= hubs-min");
  if (trials < 1) throw std::invalid_argument("verify: trials must be >= 1");
  std::vector<SuiteResult> suites;

  {
    SuiteResult suite{"Monge property of deleted-edge metrics", trials, 0, 0.0};
    Rng rng(mix_seed(seed, 1));
    for (int t = 0; t < trials; ++t) {
      const HubCycle cycle = detail::random_cycle(rng, hubs_min, hubs_max);
      bool ok = true;
      for (int e = 0; e < cycle.h && ok; ++e) {
        Matrix values = path_metric(cycle, e).values;
        const auto order = monge_order(cycle.h, e);
        if (inject_fault) values[order[0]][order[1]] += 0.5;
        ok = is_monge(values, order, 1e-9);
      }
      if (!ok) ++suite.failures;
    }
    suites.push_back(suite);
  }

  {
    SuiteResult suite{"metric sandwich by the edge-deletion mixture", trials, 0, 0.0};
    Rng rng(mix_seed(seed, 2));
    for (int t = 0; t < trials; ++t) {
      const HubCycle cycle = detail::random_cycle(rng, hubs_min, hubs_max);
      const SandwichCheck check = verify_sandwich(cycle, theta_coefficients(cycle));
      const double bound = rounding_guarantee(cycle.h);
      const double slack = std::max(check.lower_violation, check.upper_ratio - bound);
      suite.worst = std::max(suite.worst, slack);
      if (check.lower_violation > 1e-9 || check.upper_ratio > bound + 1e-9) ++suite.failures;
    }
    suites.push_back(suite);
  }

  {
    SuiteResult suite{"staircase optimality on Monge-ordered transport", trials, 0, 0.0};
    Rng rng(mix_seed(seed, 3));
    for (int t = 0; t < trials; ++t) {
      const HubCycle cycle = detail::random_cycle(rng, hubs_min, hubs_max);
      const int e = static_cast<int>(rng.below(cycle.h));
      const Matrix deleted = path_metric(cycle, e).values;
      const auto order = monge_order(cycle.h, e);
      const auto x_p = detail::random_stochastic_row(rng, cycle.h);
      const auto x_q = detail::random_stochastic_row(rng, cycle.h);
      const double staircase = plan_cost(nwcr_joint(x_p, x_q, order), deleted);
      const double exact = solve_htp_exact(x_p, x_q, deleted).cost;
      const double gap = std::fabs(staircase - exact);
      suite.worst = std::max(suite.worst, gap);
      if (gap > 1e-9) ++suite.failures;
    }
    suites.push_back(suite);
  }

  {
    SuiteResult suite{"shared-threshold joint law matches the staircase", trials, 0, 0.0};
    Rng rng(mix_seed(seed, 4));
    for (int t = 0; t < trials; ++t) {
      const int h = hubs_min + static_cast<int>(rng.below(hubs_max - hubs_min + 1));
      const auto x_p = detail::random_stochastic_row(rng, h);
      const auto x_q = detail::random_stochastic_row(rng, h);
      const auto order = detail::random_permutation(rng, h);
      const Matrix joint = nwcr_joint(x_p, x_q, order);
      double gap = 0.0;
      for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j)
          gap = std::max(gap, std::fabs(detail::interval_measure(x_p, x_q, order, i, j) -
                                        joint[order[i]][order[j]]));
      suite.worst = std::max(suite.worst, gap);
      if (gap > 1e-12) ++suite.failures;
    }
    suites.push_back(suite);
  }

  return suites;
}

}  // namespace cyclestar
