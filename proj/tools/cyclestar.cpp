// Command-line front end: generate instances, solve them with any of the
// implemented methods, verify the structural theorems in batch, and run grid
// benchmarks. Exit codes: 0 success, 1 operational or usage error, 2 a
// guarantee or theorem check failed.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cyclestar/bench.hpp"
#include "cyclestar/instance.hpp"
#include "cyclestar/io.hpp"
#include "cyclestar/solvers.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitViolation = 2;

int cmd_generate(int hubs, int nonhubs, const std::string& mode, std::uint64_t seed,
                 const std::string& out_path) {
  const cyclestar::Instance inst =
      cyclestar::generate_instance(hubs, nonhubs, cyclestar::gen_mode_from_string(mode), seed);
  cyclestar::write_instance(inst, out_path);
  std::cerr << "wrote h=" << hubs << " n=" << nonhubs << " mode=" << mode << " seed=" << seed
            << " to " << out_path << "\n";
  return kExitOk;
}

int cmd_solve(const std::string& path, const std::string& method, std::uint64_t seed,
              std::uint64_t budget) {
  const cyclestar::Instance inst = cyclestar::read_instance(path);
  const cyclestar::ExperimentRow row = cyclestar::solve_row(inst, method, seed, budget);
  if (row.error) throw std::runtime_error(*row.error);
  std::cout << row.to_json() << "\n";
  std::cerr << "method=" << method << " wall_time=" << row.wall_time << "s\n";
  if (row.within_guarantee && !*row.within_guarantee) return kExitViolation;
  return kExitOk;
}

int cmd_verify(int hubs_min, int hubs_max, int trials, std::uint64_t seed, bool inject_fault) {
  const auto suites = cyclestar::run_verify(hubs_min, hubs_max, trials, seed, inject_fault);
  bool all_pass = true;
  for (const auto& suite : suites) {
    const bool pass = suite.failures == 0;
    all_pass = all_pass && pass;
    std::cout << (pass ? "PASS" : "FAIL") << " " << suite.name << ": trials=" << suite.trials
              << " failures=" << suite.failures << " worst_gap=" << suite.worst << "\n";
  }
  std::cout << (all_pass ? "all theorem suites passed" : "theorem suite FAILURES detected")
            << "\n";
  return all_pass ? kExitOk : kExitViolation;
}

int cmd_bench(const std::string& config_path) {
  const cyclestar::ExperimentConfig cfg = cyclestar::read_config(config_path);
  std::ofstream rows(cfg.output_path, std::ios::binary | std::ios::trunc);
  if (!rows) throw std::runtime_error("cannot open output file: " + cfg.output_path);
  const cyclestar::BenchSummary summary = cyclestar::run_bench(cfg, rows, std::cout);
  rows.flush();
  if (!rows.good()) throw std::runtime_error("write failed: " + cfg.output_path);
  if (summary.violations > 0) return kExitViolation;
  if (summary.errors > 0) return kExitError;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cycle-star hub network design: LP rounding solvers and benchmarks"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "write a random instance file");
  int gen_hubs = 0;
  int gen_nonhubs = 0;
  std::string gen_mode = "general";
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--hubs", gen_hubs, "number of hubs (>= 3)")->required();
  gen->add_option("--nonhubs", gen_nonhubs, "number of non-hubs (>= 1)")->required();
  gen->add_option("--mode", gen_mode, "general or assumption1")
      ->check(CLI::IsMember({"general", "assumption1"}));
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output path")->required();

  auto* solve = app.add_subcommand("solve", "solve an instance file and print one JSON row");
  std::string solve_path;
  std::string solve_method = "combined";
  std::uint64_t solve_seed = 0;
  std::uint64_t solve_budget = 10000000;
  solve->add_option("path", solve_path, "instance file")->required();
  solve->add_option("--method", solve_method, "exact | lp | algorithm4 | independent | combined")
      ->check(CLI::IsMember(cyclestar::known_methods()));
  solve->add_option("--seed", solve_seed, "seed echoed into the report row");
  solve->add_option("--budget", solve_budget, "assignment budget for the exact audit");

  auto* verify = app.add_subcommand("verify", "run the theorem property suites");
  int verify_min = 3;
  int verify_max = 8;
  int verify_trials = 200;
  std::uint64_t verify_seed = 1;
  bool verify_fault = false;
  verify->add_option("--hubs-min", verify_min, "smallest cycle size")->check(CLI::Range(3, 1000));
  verify->add_option("--hubs-max", verify_max, "largest cycle size");
  verify->add_option("--trials", verify_trials, "trials per suite")
      ->check(CLI::Range(1, 100000000));
  verify->add_option("--seed", verify_seed, "suite seed");
  verify->add_flag("--inject-fault", verify_fault,
                   "deliberately corrupt suite 1 to prove failures are detected");

  auto* bench = app.add_subcommand("bench", "run a grid experiment from a JSON config");
  std::string bench_config;
  bench->add_option("config", bench_config, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitError;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_hubs, gen_nonhubs, gen_mode, gen_seed, gen_out);
    if (solve->parsed()) return cmd_solve(solve_path, solve_method, solve_seed, solve_budget);
    if (verify->parsed())
      return cmd_verify(verify_min, verify_max, verify_trials, verify_seed, verify_fault);
    if (bench->parsed()) return cmd_bench(bench_config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
