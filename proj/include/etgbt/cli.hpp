#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "etgbt/environment.hpp"
#include "etgbt/scenario_io.hpp"

namespace etgbt::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 2,
  kExitNoSolution = 3,
  kExitBoundFailure = 4,
};

/// Entry point for the `etgbt` tool. Subcommands: plan, simulate,
/// verify-bounds, benchmark, gen-env.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

enum class BudgetUnit { Seconds, Iterations };

struct BenchmarkConfig {
  std::vector<double> budgets;  // ascending
  int trials = 20;
  std::uint64_t seed = 1;
  BudgetUnit unit = BudgetUnit::Seconds;
  // When set, trial i plans in its own generated environment.
  std::optional<RandomEnvParams> random_envs;
  int threads = 1;
};

struct BenchmarkTrial {
  int index = 0;
  std::uint64_t seed = 0;
  std::vector<std::optional<double>> best_cost;  // one per budget; nullopt = no solution yet
  std::vector<std::string> warnings;
};

struct BenchmarkRow {
  double budget = 0.0;
  int trials = 0;
  int solved = 0;
  double mean_cost = 0.0;
  double std_error = 0.0;
};

struct BenchmarkResult {
  std::vector<BenchmarkTrial> trials;
  std::vector<BenchmarkRow> rows;
};

/// One planner run per trial at the largest budget; the best cost at each
/// smaller budget is read from the run's improvement log, so every budget
/// sees the same seed and the same search prefix.
BenchmarkResult run_benchmark(const Scenario& base, const BenchmarkConfig& config);

/// Scenario around a generated environment with the 2D single-integrator
/// system (A = B = C = I, Q = R = 0.01 I, K = 0.5 I), Sigma0 = 0.01 I and
/// default planner settings with controls in [-2, 2]^2.
Scenario default_scenario(const GeneratedEnvironment& generated, const std::string& name);

}  // namespace etgbt::cli
