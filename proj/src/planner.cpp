#include "etgbt/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "etgbt/error.hpp"
#include "etgbt/trigger_math.hpp"

namespace etgbt {

namespace {

Vec2 position(const Vector& mean) { return mean.head<2>(); }

double radius_scale(double p_safe, int n_pos, ContainmentRule rule) {
  if (rule == ContainmentRule::ScaledVariance) return -std_normal_quantile(0.5 * p_safe);
  return std::sqrt(chi2_quantile(p_safe, n_pos));
}

double radius_from_scale(double scale, const BoundState& bound, ContainmentRule rule) {
  const double total = std::max(0.0, bound.total());
  return rule == ContainmentRule::ScaledVariance ? scale * total : scale * std::sqrt(total);
}

std::string describe(const PlannerStats& s) {
  std::ostringstream os;
  os << "no goal-reaching node after " << s.iterations << " iterations (tree " << s.tree_size << ", active "
     << s.active_nodes << ", witnesses " << s.witnesses << ", valid extensions " << s.valid_extensions << ")";
  return os.str();
}

}  // namespace

void PlannerParams::validate(const LinearSystem& sys) const {
  const auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidParameter, msg); };
  if (sys.n() < kPositionalDims) fail("state must have at least two positional coordinates");
  if (!(p_safe > 0.0 && p_safe < 1.0)) fail("p_safe must lie in (0, 1)");
  if (!(cost_cm > 0.0)) fail("cost_cm must be positive");
  if (!(delta_min > 0.0) || !(delta_max >= delta_min) || !std::isfinite(delta_max)) {
    fail("delta range must satisfy 0 < delta_min <= delta_max");
  }
  if (steps_min < 1 || steps_max < steps_min) fail("steps_per_edge range must satisfy 1 <= lo <= hi");
  if (!(selection_radius > 0.0) || !(witness_radius > 0.0) || !(witness_radius < selection_radius)) {
    fail("need 0 < witness_radius < selection_radius");
  }
  if (!(goal_bias >= 0.0 && goal_bias <= 1.0)) fail("goal_bias must lie in [0, 1]");
  if (max_iterations < 0 || time_budget < 0.0) fail("budgets must be nonnegative");
  if (max_iterations == 0 && time_budget == 0.0) fail("one of max_iterations or time_budget must be set");
  if (control_lo.size() != sys.p() || control_hi.size() != sys.p()) fail("control box must have p entries");
  if (!(control_lo.array() <= control_hi.array()).all()) fail("control box needs lo <= hi");
  const int aux = sys.n() - kPositionalDims;
  if (aux > 0) {
    if (aux_state_lo.size() != aux || aux_state_hi.size() != aux) fail("aux state box must have n - 2 entries");
    if (!(aux_state_lo.array() <= aux_state_hi.array()).all()) fail("aux state box needs lo <= hi");
  }
}

double wasserstein2(const BoundedBelief& a, const BoundedBelief& b) {
  const double n = static_cast<double>(a.mean.size());
  const double ds = std::sqrt(std::max(0.0, a.bound.total())) - std::sqrt(std::max(0.0, b.bound.total()));
  return std::sqrt((a.mean - b.mean).squaredNorm() + n * ds * ds);
}

double containment_radius(const BoundState& bound, double p_safe, int n_pos, ContainmentRule rule) {
  return radius_from_scale(radius_scale(p_safe, n_pos, rule), bound, rule);
}

namespace {

EdgeCheck propagate_edge(const BoundedBelief& parent, const Vector& control, Threshold delta, int steps,
                         const LinearSystem& sys, const ScalarBounds& sb, const Environment& env, double scale,
                         ContainmentRule rule, bool keep_steps) {
  EdgeCheck out;
  BoundedBelief cur = parent;
  const Vector drift = sys.B * control;
  if (keep_steps) out.per_step.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    cur.mean = sys.A * cur.mean + drift;
    try {
      cur.bound = bound_step(cur.bound, sb, delta);
    } catch (const Error&) {
      out.child = cur;
      return out;
    }
    if (keep_steps) out.per_step.push_back(cur);
    if (!env.sphere_obstacle_free(position(cur.mean), radius_from_scale(scale, cur.bound, rule))) {
      out.child = cur;
      return out;
    }
  }
  out.valid = true;
  out.child = std::move(cur);
  return out;
}

}  // namespace

EdgeCheck valid_path_check(const BoundedBelief& parent, const Vector& control, Threshold delta, int steps,
                           const LinearSystem& sys, const ScalarBounds& sb, const Environment& env,
                           const PlannerParams& params) {
  if (steps < params.steps_min || steps > params.steps_max) {
    throw Error(ErrorCode::InvalidParameter, "edge step count outside the configured range");
  }
  return propagate_edge(parent, control, delta, steps, sys, sb, env,
                        radius_scale(params.p_safe, kPositionalDims, params.containment), params.containment, true);
}

bool goal_check(const BoundedBelief& belief, const Environment& env, const PlannerParams& params) {
  return env.sphere_in_goal(position(belief.mean),
                            containment_radius(belief.bound, params.p_safe, kPositionalDims, params.containment));
}

double plan_cost(std::span<const Threshold> deltas, int m, double cost_cm) {
  double total = 0.0;
  for (const Threshold& d : deltas) total += cost_cm * gamma_rate(d.value(), m);
  return total;
}

NoSolution::NoSolution(const PlannerStats& stats, std::vector<CostEvent> /*log*/)
    : Error(ErrorCode::NoSolution, describe(stats)), stats_(stats) {}

Planner::Planner(const ValidatedSystem& sys, Environment env, PlannerParams params, Vector start_mean,
                 Matrix sigma0, Matrix lambda0)
    : Planner(sys, std::move(env), std::move(params), std::move(start_mean), std::move(sigma0), std::move(lambda0),
              Options{}) {}

Planner::Planner(const ValidatedSystem& sys, Environment env, PlannerParams params, Vector start_mean,
                 Matrix sigma0, Matrix lambda0, Options options)
    : sys_(sys.system()),
      sb_(derive_scalar_bounds(sys)),
      env_(std::move(env)),
      params_(std::move(params)),
      options_(options),
      sigma0_(std::move(sigma0)),
      lambda0_(std::move(lambda0)),
      rng_(params_.seed) {
  params_.validate(sys_);
  if (start_mean.size() != sys_.n()) throw Error(ErrorCode::DimensionMismatch, "start mean must have n entries");
  if (sigma0_.rows() != sys_.n() || lambda0_.rows() != sys_.n()) {
    throw Error(ErrorCode::DimensionMismatch, "initial covariances must be n x n");
  }
  radius_scale_ = radius_scale(params_.p_safe, kPositionalDims, params_.containment);
  TreeNode root;
  root.belief = BoundedBelief{std::move(start_mean), init_bounds(sigma0_, lambda0_)};
  const double r0 = radius_from_scale(radius_scale_, root.belief.bound, params_.containment);
  if (!env_.sphere_obstacle_free(position(root.belief.mean), r0)) {
    throw Error(ErrorCode::InvalidStart, "start containment disc intersects an obstacle or leaves the workspace");
  }
  root.reaches_goal = env_.sphere_in_goal(position(root.belief.mean), r0);
  max_bound_total_ = root.belief.bound.total();
  const int id = add_node(std::move(root));
  witnesses_.push_back({nodes_[static_cast<std::size_t>(id)].belief, id});
  if (nodes_[0].reaches_goal) {
    best_goal_ = 0;
    goal_nodes_ = 1;
  }
}

int Planner::add_node(TreeNode node) {
  node.id = static_cast<int>(nodes_.size());
  node.active = true;
  if (node.parent >= 0) ++nodes_[static_cast<std::size_t>(node.parent)].children;
  max_bound_total_ = std::max(max_bound_total_, node.belief.bound.total());
  active_pos_.push_back(static_cast<int>(active_.size()));
  active_.push_back(node.id);
  nodes_.push_back(std::move(node));
  return nodes_.back().id;
}

void Planner::deactivate(int id) {
  TreeNode& node = nodes_[static_cast<std::size_t>(id)];
  if (!node.active) return;
  node.active = false;
  const int pos = active_pos_[static_cast<std::size_t>(id)];
  const int last = active_.back();
  active_[static_cast<std::size_t>(pos)] = last;
  active_pos_[static_cast<std::size_t>(last)] = pos;
  active_.pop_back();
  active_pos_[static_cast<std::size_t>(id)] = -1;
}

void Planner::remove_inactive_leaves(int id) {
  while (id >= 0) {
    TreeNode& node = nodes_[static_cast<std::size_t>(id)];
    if (node.active || node.removed || node.children > 0 || (best_goal_ && *best_goal_ == id)) return;
    node.removed = true;
    node.belief.mean = Vector();
    node.edge.control = Vector();
    const int parent = node.parent;
    if (parent >= 0) --nodes_[static_cast<std::size_t>(parent)].children;
    id = parent;
  }
}

int Planner::nearest_witness(const BoundedBelief& b, double* dist) const {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < witnesses_.size(); ++i) {
    const double d = wasserstein2(b, witnesses_[i].point);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  *dist = best_d;
  return best;
}

BoundedBelief Planner::sample_belief() {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BoundedBelief b;
  b.mean = Vector::Zero(sys_.n());
  const bool toward_goal = unit(rng_) < params_.goal_bias;
  if (toward_goal) {
    if (const auto* g = std::get_if<AxisBox>(&env_.goal())) {
      for (int i = 0; i < kPositionalDims; ++i) b.mean(i) = g->lo(i) + unit(rng_) * (g->hi(i) - g->lo(i));
    } else {
      const auto& c = std::get<Circle>(env_.goal());
      const double r = c.radius * std::sqrt(unit(rng_));
      const double t = 2.0 * std::numbers::pi * unit(rng_);
      b.mean(0) = c.center(0) + r * std::cos(t);
      b.mean(1) = c.center(1) + r * std::sin(t);
    }
  } else {
    const AxisBox& ws = env_.workspace();
    for (int i = 0; i < kPositionalDims; ++i) b.mean(i) = ws.lo(i) + unit(rng_) * (ws.hi(i) - ws.lo(i));
  }
  for (int i = kPositionalDims; i < sys_.n(); ++i) {
    const auto j = i - kPositionalDims;
    b.mean(i) = params_.aux_state_lo(j) + unit(rng_) * (params_.aux_state_hi(j) - params_.aux_state_lo(j));
  }
  const double s = unit(rng_) * max_bound_total_;
  b.bound = BoundState{0.0, s, s, 0};
  return b;
}

Threshold Planner::sample_delta() {
  std::uniform_real_distribution<double> u(std::log(params_.delta_min), std::log(params_.delta_max));
  const double d = std::exp(u(rng_));
  return Threshold(std::clamp(d, params_.delta_min, params_.delta_max));
}

Vector Planner::sample_control() {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector u(sys_.p());
  for (int i = 0; i < sys_.p(); ++i) {
    u(i) = params_.control_lo(i) + unit(rng_) * (params_.control_hi(i) - params_.control_lo(i));
  }
  return u;
}

int Planner::sample_steps() {
  std::uniform_int_distribution<int> d(params_.steps_min, params_.steps_max);
  return d(rng_);
}

int Planner::select_node(const BoundedBelief& sample) const {
  int near_best = -1;
  double near_cost = std::numeric_limits<double>::infinity();
  int nearest = -1;
  double nearest_d = std::numeric_limits<double>::infinity();
  for (int id : active_) {
    const TreeNode& node = nodes_[static_cast<std::size_t>(id)];
    if (node.reaches_goal) continue;
    const double d = wasserstein2(sample, node.belief);
    if (d <= params_.selection_radius &&
        (node.cost_to_come < near_cost || (node.cost_to_come == near_cost && id < near_best))) {
      near_cost = node.cost_to_come;
      near_best = id;
    }
    if (d < nearest_d || (d == nearest_d && id < nearest)) {
      nearest_d = d;
      nearest = id;
    }
  }
  if (near_best >= 0) return near_best;
  return nearest >= 0 ? nearest : 0;
}

std::optional<int> Planner::try_extend(int from, const Vector& control, Threshold delta, int steps) {
  const TreeNode& parent = nodes_[static_cast<std::size_t>(from)];
  EdgeCheck check = propagate_edge(parent.belief, control, delta, steps, sys_, sb_, env_, radius_scale_,
                                   params_.containment, false);
  if (!check.valid) return std::nullopt;
  ++valid_extensions_;

  const double cost = parent.cost_to_come + steps * params_.cost_cm * gamma_rate(delta.value(), sys_.m());
  const double best_cost = best_goal_ ? nodes_[static_cast<std::size_t>(*best_goal_)].cost_to_come
                                      : std::numeric_limits<double>::infinity();
  if (cost >= best_cost) return std::nullopt;

  double wd = 0.0;
  int w = nearest_witness(check.child, &wd);
  if (w < 0 || wd > params_.witness_radius) {
    witnesses_.push_back({check.child, -1});
    w = static_cast<int>(witnesses_.size()) - 1;
  }
  const int peer = witnesses_[static_cast<std::size_t>(w)].rep;
  if (peer >= 0 && nodes_[static_cast<std::size_t>(peer)].cost_to_come <= cost) return std::nullopt;

  TreeNode node;
  node.belief = std::move(check.child);
  node.parent = from;
  node.edge = TreeEdge{control, delta.value(), steps};
  node.cost_to_come = cost;
  node.reaches_goal = env_.sphere_in_goal(position(node.belief.mean),
                                          radius_from_scale(radius_scale_, node.belief.bound, params_.containment));
  const int id = add_node(std::move(node));
  witnesses_[static_cast<std::size_t>(w)].rep = id;

  if (peer >= 0) {
    deactivate(peer);
    remove_inactive_leaves(peer);
  }
  if (options_.audit_pruning && best_goal_) {
    const TreeNode& b = nodes_[static_cast<std::size_t>(*best_goal_)];
    if (b.removed || b.cost_to_come != best_cost) ++audit_violations_;
  }

  if (nodes_[static_cast<std::size_t>(id)].reaches_goal) {
    ++goal_nodes_;
    const std::optional<int> previous = best_goal_;
    best_goal_ = id;
    if (previous) remove_inactive_leaves(*previous);
  }
  return id;
}

PlannerStats Planner::stats() const {
  PlannerStats s;
  s.iterations = iterations_;
  s.tree_size = static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return !n.removed; }));
  s.active_nodes = active_.size();
  s.witnesses = witnesses_.size();
  s.valid_extensions = valid_extensions_;
  s.goal_nodes = goal_nodes_;
  s.prune_audit_violations = audit_violations_;
  s.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
  return s;
}

METCPlan Planner::extract_plan(int node_id) const {
  std::vector<int> path;
  for (int id = node_id; id >= 0; id = nodes_[static_cast<std::size_t>(id)].parent) path.push_back(id);
  std::reverse(path.begin(), path.end());

  METCPlan plan;
  plan.m = sys_.m();
  plan.cost_cm = params_.cost_cm;
  plan.sigma0 = sigma0_;
  plan.lambda0 = lambda0_;
  const TreeNode& root = nodes_[static_cast<std::size_t>(path.front())];
  Vector mean = root.belief.mean;
  BoundState bound = root.belief.bound;
  plan.nominal_states.push_back(mean);
  plan.bounds.push_back(bound);
  for (std::size_t i = 1; i < path.size(); ++i) {
    const TreeEdge& e = nodes_[static_cast<std::size_t>(path[i])].edge;
    const Threshold d(e.delta);
    const Vector drift = sys_.B * e.control;
    for (int k = 0; k < e.steps; ++k) {
      mean = sys_.A * mean + drift;
      bound = bound_step(bound, sb_, d);
      plan.nominal_states.push_back(mean);
      plan.nominal_controls.push_back(e.control);
      plan.deltas.push_back(d);
      plan.bounds.push_back(bound);
    }
  }
  plan.horizon = static_cast<int>(plan.deltas.size());
  plan.expected_cost = plan_cost(plan.deltas, plan.m, plan.cost_cm);
  return plan;
}

PlanResult Planner::run() {
  started_ = std::chrono::steady_clock::now();
  std::vector<CostEvent> log;
  const auto elapsed = [this] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
  };
  if (best_goal_ && *best_goal_ == 0) {
    PlanResult res{extract_plan(0), stats(), {}};
    res.improvements.push_back({0, 0.0, 1, 0.0});
    return res;
  }
  double best_cost = std::numeric_limits<double>::infinity();
  while ((params_.max_iterations == 0 || iterations_ < params_.max_iterations) &&
         (params_.time_budget == 0.0 || elapsed() < params_.time_budget)) {
    ++iterations_;
    const BoundedBelief sample = sample_belief();
    const Threshold delta = sample_delta();
    const Vector control = sample_control();
    const int steps = sample_steps();
    const int selected = select_node(sample);
    try_extend(selected, control, delta, steps);

    const bool improved = best_goal_ && nodes_[static_cast<std::size_t>(*best_goal_)].cost_to_come < best_cost;
    if (improved) best_cost = nodes_[static_cast<std::size_t>(*best_goal_)].cost_to_come;
    if (improved || (options_.log_every > 0 && iterations_ % options_.log_every == 0)) {
      log.push_back({iterations_, elapsed(), stats().tree_size, best_cost});
    }
  }
  if (!best_goal_) throw NoSolution(stats(), std::move(log));
  return PlanResult{extract_plan(*best_goal_), stats(), std::move(log)};
}

PlanResult plan(const ValidatedSystem& sys, const Environment& env, const PlannerParams& params,
                const Vector& start_mean, const Matrix& sigma0, const Matrix& lambda0) {
  Planner planner(sys, env, params, start_mean, sigma0, lambda0);
  return planner.run();
}

double replay_deviation(const METCPlan& plan, const LinearSystem& sys, const ScalarBounds& sb) {
  const auto T = static_cast<std::size_t>(plan.horizon);
  if (plan.nominal_states.size() != T + 1 || plan.bounds.size() != T + 1 || plan.nominal_controls.size() != T ||
      plan.deltas.size() != T) {
    return std::numeric_limits<double>::infinity();
  }
  double dev = 0.0;
  Vector mean = plan.nominal_states.front();
  BoundState bound = plan.bounds.front();
  for (std::size_t k = 0; k < T; ++k) {
    if (plan.nominal_controls[k].size() != sys.p() || mean.size() != sys.n()) {
      return std::numeric_limits<double>::infinity();
    }
    mean = sys.A * mean + sys.B * plan.nominal_controls[k];
    bound = bound_step(bound, sb, plan.deltas[k]);
    if (plan.nominal_states[k + 1].size() != sys.n()) return std::numeric_limits<double>::infinity();
    dev = std::max(dev, (mean - plan.nominal_states[k + 1]).cwiseAbs().maxCoeff());
    const BoundState& s = plan.bounds[k + 1];
    dev = std::max({dev, std::abs(bound.lambda_bar - s.lambda_bar), std::abs(bound.p_bar - s.p_bar),
                    std::abs(bound.p_lo - s.p_lo)});
  }
  dev = std::max(dev, std::abs(plan.expected_cost - plan_cost(plan.deltas, plan.m, plan.cost_cm)));
  return dev;
}

}  // namespace etgbt
