#include "etgbt/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>

namespace etgbt {

namespace {

// Symmetric square root of a PSD matrix; negative eigenvalues from rounding
// are clamped to zero.
Matrix psd_sqrt(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(M));
  const Vector d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

Vector gaussian(std::mt19937_64& rng, const Matrix& factor) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vector z(factor.cols());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = nd(rng);
  return factor * z;
}

struct NoiseFactors {
  Matrix sigma0, q, r;
};

RolloutResult rollout_with(const METCPlan& plan, const LinearSystem& sys, const Environment& env,
                           const NoiseFactors& f, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto T = static_cast<std::size_t>(plan.horizon);
  RolloutResult out;
  out.states.reserve(T + 1);
  out.estimates.reserve(T + 1);
  out.triggers.reserve(T);
  out.epsilon_min.reserve(T + 1);

  GaussianEstimate est{plan.nominal_states.front(), plan.sigma0, 0};
  Vector x = est.mean + gaussian(rng, f.sigma0);
  OfflineCovPair pair{plan.sigma0, plan.lambda0};

  const auto note_state = [&](const Vector& s, int k) {
    if (!out.collided && env.point_in_obstacle(s.head<2>())) {
      out.collided = true;
      out.first_collision_step = k;
    }
  };
  out.states.push_back(x);
  out.estimates.push_back(est);
  out.epsilon_min.push_back(bound_margin(plan.bounds.front(), pair));
  note_state(x, 0);

  int fired = 0;
  for (std::size_t k = 0; k < T; ++k) {
    const Threshold delta = plan.deltas[k];
    const Vector u = plan.nominal_controls[k] - sys.K * (est.mean - plan.nominal_states[k]);
    x = sys.A * x + sys.B * u + gaussian(rng, f.q);
    const Vector y = sys.C * x + gaussian(rng, f.r);

    const GaussianEstimate prior = et_predict(est, u, sys);
    const TriggerEvaluation ev = evaluate_trigger(prior, y, delta, sys);
    est = et_correct(prior, ev.decision, ev.innovation, delta, sys);
    pair = et_offline_cov_step(pair, ev.decision.gamma, delta, sys);

    out.triggers.push_back(ev.decision.gamma ? 1 : 0);
    fired += ev.decision.gamma ? 1 : 0;
    out.states.push_back(x);
    out.estimates.push_back(est);
    out.epsilon_min.push_back(bound_margin(plan.bounds[k + 1], pair));
    note_state(x, static_cast<int>(k + 1));
  }
  out.reached_goal = env.point_in_goal(x.head<2>());
  out.comm_cost = plan.cost_cm * fired;
  return out;
}

NoiseFactors factors_for(const METCPlan& plan, const LinearSystem& sys) {
  return NoiseFactors{psd_sqrt(plan.sigma0), psd_sqrt(sys.Q), psd_sqrt(sys.R)};
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // Two splitmix64 rounds: one to spread the master, one for the index.
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

RolloutResult rollout(const METCPlan& plan, const LinearSystem& sys, const Environment& env, std::uint64_t seed) {
  return rollout_with(plan, sys, env, factors_for(plan, sys), seed);
}

double empirical_bound_check(const RolloutResult& result) {
  if (result.epsilon_min.empty()) return std::numeric_limits<double>::infinity();
  return *std::min_element(result.epsilon_min.begin(), result.epsilon_min.end());
}

int default_thread_count() {
  if (const char* env = std::getenv("ETGBT_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

SimStats monte_carlo(const METCPlan& plan, const LinearSystem& sys, const Environment& env, int n_runs,
                     std::uint64_t seed, MonteCarloOptions options) {
  if (n_runs < 1) throw Error(ErrorCode::InvalidParameter, "n_runs must be at least 1");
  const auto T = static_cast<std::size_t>(plan.horizon);
  const NoiseFactors f = factors_for(plan, sys);
  const int threads = std::clamp(options.threads > 0 ? options.threads : default_thread_count(), 1, n_runs);
  const int trace_runs = std::clamp(options.trace_runs, 0, n_runs);

  struct RunSummary {
    bool collided = false;
    bool goal = false;
    double cost = 0.0;
  };
  // Integer counts and minima are reduced per worker; they do not depend on
  // the order in which runs finish. Costs are summed in index order below.
  struct WorkerAcc {
    std::vector<long long> fired;
    std::vector<double> eps_min;
  };
  std::vector<RunSummary> runs(static_cast<std::size_t>(n_runs));
  std::vector<std::vector<double>> traces(static_cast<std::size_t>(trace_runs));
  std::vector<WorkerAcc> acc(static_cast<std::size_t>(threads));
  std::atomic<int> next{0};

  const auto work = [&](WorkerAcc& a) {
    a.fired.assign(T, 0);
    a.eps_min.assign(T + 1, std::numeric_limits<double>::infinity());
    for (int i = next.fetch_add(1); i < n_runs; i = next.fetch_add(1)) {
      RolloutResult r = rollout_with(plan, sys, env, f, derive_seed(seed, static_cast<std::uint64_t>(i)));
      runs[static_cast<std::size_t>(i)] = {r.collided, r.reached_goal, r.comm_cost};
      for (std::size_t k = 0; k < T; ++k) a.fired[k] += r.triggers[k];
      for (std::size_t k = 0; k <= T; ++k) a.eps_min[k] = std::min(a.eps_min[k], r.epsilon_min[k]);
      if (i < trace_runs) traces[static_cast<std::size_t>(i)] = std::move(r.epsilon_min);
    }
  };
  if (threads == 1) {
    work(acc[0]);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, std::ref(acc[static_cast<std::size_t>(t)]));
    for (auto& th : pool) th.join();
  }

  SimStats s;
  s.runs = n_runs;
  s.per_step_trigger_rate.assign(T, 0.0);
  s.per_step_min_epsilon.assign(T + 1, std::numeric_limits<double>::infinity());
  std::vector<long long> fired(T, 0);
  for (const WorkerAcc& a : acc) {
    for (std::size_t k = 0; k < T; ++k) fired[k] += a.fired[k];
    for (std::size_t k = 0; k <= T; ++k) s.per_step_min_epsilon[k] = std::min(s.per_step_min_epsilon[k], a.eps_min[k]);
  }
  for (std::size_t k = 0; k < T; ++k) s.per_step_trigger_rate[k] = static_cast<double>(fired[k]) / n_runs;
  s.min_epsilon_overall = *std::min_element(s.per_step_min_epsilon.begin(), s.per_step_min_epsilon.end());

  long long collided = 0, goal = 0;
  double sum = 0.0;
  for (const RunSummary& r : runs) {
    collided += r.collided;
    goal += r.goal;
    sum += r.cost;
  }
  s.collision_fraction = static_cast<double>(collided) / n_runs;
  s.goal_fraction = static_cast<double>(goal) / n_runs;
  s.mean_cost = sum / n_runs;
  double ss = 0.0;
  for (const RunSummary& r : runs) ss += (r.cost - s.mean_cost) * (r.cost - s.mean_cost);
  s.std_cost = n_runs > 1 ? std::sqrt(ss / (n_runs - 1)) : 0.0;
  s.epsilon_traces = std::move(traces);
  return s;
}

}  // namespace etgbt
