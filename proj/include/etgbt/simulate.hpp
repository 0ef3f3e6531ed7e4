#pragma once

#include <cstdint>
#include <vector>

#include "etgbt/environment.hpp"
#include "etgbt/filter.hpp"
#include "etgbt/planner.hpp"

namespace etgbt {

struct RolloutResult {
  std::vector<Vector> states;               // true x_0..x_T
  std::vector<GaussianEstimate> estimates;  // xhat_0..xhat_T
  std::vector<std::uint8_t> triggers;       // gamma_1..gamma_T
  bool collided = false;
  int first_collision_step = -1;
  bool reached_goal = false;
  double comm_cost = 0.0;
  std::vector<double> epsilon_min;          // margin at steps 0..T
};

struct SimStats {
  int runs = 0;
  double collision_fraction = 0.0;
  double goal_fraction = 0.0;
  double mean_cost = 0.0;
  double std_cost = 0.0;
  std::vector<double> per_step_trigger_rate;  // T entries
  std::vector<double> per_step_min_epsilon;   // T + 1 entries
  double min_epsilon_overall = 0.0;
  // Margin traces for the first few runs, for plotting.
  std::vector<std::vector<double>> epsilon_traces;
};

/// Per-run seed from (master, index) via splitmix64; order-independent.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Closed-loop execution of a plan with the event-triggered filter in the
/// loop. Collision is checked on the true state at every step, goal
/// membership on the terminal true state.
RolloutResult rollout(const METCPlan& plan, const LinearSystem& sys, const Environment& env, std::uint64_t seed);

/// Minimum bound margin over the rollout; PASS iff >= -1e-9.
double empirical_bound_check(const RolloutResult& result);

struct MonteCarloOptions {
  int threads = 0;        // 0: ETGBT_THREADS or hardware concurrency
  int trace_runs = 50;    // epsilon traces kept for the first N runs
};

/// n_runs rollouts with seeds derive_seed(seed, i), reduced in index order.
SimStats monte_carlo(const METCPlan& plan, const LinearSystem& sys, const Environment& env, int n_runs,
                     std::uint64_t seed, MonteCarloOptions options = {});

/// Worker count from ETGBT_THREADS, falling back to hardware concurrency.
int default_thread_count();

}  // namespace etgbt
