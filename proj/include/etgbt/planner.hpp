#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <random>
#include <string>
#include <vector>

#include "etgbt/bounds.hpp"
#include "etgbt/environment.hpp"
#include "etgbt/error.hpp"
#include "etgbt/model.hpp"

namespace etgbt {

enum class ContainmentRule {
  ChiSquare,       // sqrt(chi2_quantile(p_safe, 2)) * sqrt(lambda_bar + p_bar)
  ScaledVariance,  // -quantile(0.5 p_safe) * (lambda_bar + p_bar)
};

struct PlannerParams {
  double p_safe = 0.99;
  double cost_cm = 1.0;
  double delta_min = 0.1;
  double delta_max = kDefaultDeltaMax;
  int steps_min = 2;
  int steps_max = 10;
  double selection_radius = 5.0;
  double witness_radius = 2.5;
  double goal_bias = 0.05;
  std::int64_t max_iterations = 100000;  // 0: unlimited
  double time_budget = 0.0;              // seconds; 0: unlimited
  std::uint64_t seed = 1;
  Vector control_lo;  // p-vector
  Vector control_hi;  // p-vector
  // Sampling box for the non-positional state coordinates (n - 2 entries).
  Vector aux_state_lo;
  Vector aux_state_hi;
  ContainmentRule containment = ContainmentRule::ChiSquare;

  /// Checks ranges and sizes against the system. Throws InvalidParameter.
  void validate(const LinearSystem& sys) const;
};

inline constexpr int kPositionalDims = 2;

/// 2-Wasserstein distance between N(a.mean, s_a I) and
/// N(b.mean, s_b I) with s = lambda_bar + p_bar.
double wasserstein2(const BoundedBelief& a, const BoundedBelief& b);

/// Radius of the positional disc holding at least p_safe of the mass of any
/// Gaussian dominated by (lambda_bar + p_bar) I.
double containment_radius(const BoundState& bound, double p_safe, int n_pos,
                          ContainmentRule rule = ContainmentRule::ChiSquare);

struct EdgeCheck {
  bool valid = false;
  BoundedBelief child;
  std::vector<BoundedBelief> per_step;  // beliefs after each step, size = steps (up to failure)
};

/// Propagates nominal mean and bound over `steps` steps with a constant
/// control and threshold; valid iff the containment disc is obstacle-free at
/// every step. A diverging bound invalidates the edge.
EdgeCheck valid_path_check(const BoundedBelief& parent, const Vector& control, Threshold delta, int steps,
                           const LinearSystem& sys, const ScalarBounds& sb, const Environment& env,
                           const PlannerParams& params);

bool goal_check(const BoundedBelief& belief, const Environment& env, const PlannerParams& params);

/// Sum of c_m * Gamma(delta_k, m).
double plan_cost(std::span<const Threshold> deltas, int m, double cost_cm);

struct TreeEdge {
  Vector control;
  double delta = 0.0;
  int steps = 0;
};

struct TreeNode {
  int id = 0;
  BoundedBelief belief;
  int parent = -1;
  TreeEdge edge;
  double cost_to_come = 0.0;
  bool active = true;
  bool removed = false;
  bool reaches_goal = false;
  int children = 0;
};

struct METCPlan {
  std::vector<Vector> nominal_states;    // T + 1
  std::vector<Vector> nominal_controls;  // T
  std::vector<Threshold> deltas;         // T
  std::vector<BoundState> bounds;        // T + 1
  double expected_cost = 0.0;
  int horizon = 0;
  int m = 1;
  double cost_cm = 1.0;
  Matrix sigma0;
  Matrix lambda0;
};

struct PlannerStats {
  std::int64_t iterations = 0;
  std::size_t tree_size = 0;     // live (non-removed) nodes
  std::size_t active_nodes = 0;
  std::size_t witnesses = 0;
  std::size_t valid_extensions = 0;
  std::size_t goal_nodes = 0;
  double elapsed_s = 0.0;
  std::size_t prune_audit_violations = 0;
};

struct CostEvent {
  std::int64_t iteration = 0;
  double elapsed_s = 0.0;
  std::size_t tree_size = 0;
  double best_cost = 0.0;
};

struct PlanResult {
  METCPlan plan;
  PlannerStats stats;
  std::vector<CostEvent> improvements;
};

class NoSolution : public Error {
 public:
  NoSolution(const PlannerStats& stats, std::vector<CostEvent> log);
  const PlannerStats& stats() const { return stats_; }

 private:
  PlannerStats stats_;
};

/// Sampling-based tree search over bounded beliefs with best-near selection
/// and witness pruning. One instance per run; not thread-safe.
class Planner {
 public:
  struct Options {
    bool audit_pruning = false;
    std::int64_t log_every = 0;  // >0: record a CostEvent every N iterations as well
  };

  Planner(const ValidatedSystem& sys, Environment env, PlannerParams params, Vector start_mean, Matrix sigma0,
          Matrix lambda0);
  Planner(const ValidatedSystem& sys, Environment env, PlannerParams params, Vector start_mean, Matrix sigma0,
          Matrix lambda0, Options options);

  /// Runs until the iteration or time budget is exhausted. Throws NoSolution.
  PlanResult run();

  // Single-step primitives, exposed for testing.
  BoundedBelief sample_belief();
  Threshold sample_delta();
  Vector sample_control();
  int sample_steps();
  int select_node(const BoundedBelief& sample) const;
  /// Attempts to add the given edge from node `from`. Returns the new node id
  /// or nullopt when rejected (invalid, dominated or not cheaper than the best
  /// solution).
  std::optional<int> try_extend(int from, const Vector& control, Threshold delta, int steps);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::optional<int> best_goal() const { return best_goal_; }
  METCPlan extract_plan(int node) const;
  PlannerStats stats() const;
  const ScalarBounds& scalar_bounds() const { return sb_; }

 private:
  struct Witness {
    BoundedBelief point;
    int rep = -1;
  };

  int add_node(TreeNode node);
  void deactivate(int id);
  void remove_inactive_leaves(int id);
  int nearest_witness(const BoundedBelief& b, double* dist) const;

  LinearSystem sys_;
  ScalarBounds sb_;
  Environment env_;
  PlannerParams params_;
  Options options_;
  Matrix sigma0_;
  Matrix lambda0_;
  std::mt19937_64 rng_;

  std::vector<TreeNode> nodes_;
  std::vector<int> active_;     // ids of active nodes, in insertion order with swap-removal
  std::vector<int> active_pos_; // node id -> index into active_, -1 when inactive
  std::vector<Witness> witnesses_;
  std::optional<int> best_goal_;
  double max_bound_total_ = 0.0;
  double radius_scale_ = 0.0;
  std::int64_t iterations_ = 0;
  std::size_t valid_extensions_ = 0;
  std::size_t goal_nodes_ = 0;
  std::size_t audit_violations_ = 0;
  std::chrono::steady_clock::time_point started_{};
};

/// Convenience wrapper: constructs a Planner and runs it.
PlanResult plan(const ValidatedSystem& sys, const Environment& env, const PlannerParams& params,
                const Vector& start_mean, const Matrix& sigma0, const Matrix& lambda0);

/// Re-propagates nominal states and bounds from the stored controls and
/// thresholds. Returns the largest absolute deviation found.
double replay_deviation(const METCPlan& plan, const LinearSystem& sys, const ScalarBounds& sb);

}  // namespace etgbt
