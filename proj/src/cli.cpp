#include "etgbt/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "etgbt/bounds.hpp"
#include "etgbt/error.hpp"
#include "etgbt/planner.hpp"
#include "etgbt/simulate.hpp"

namespace etgbt::cli {

namespace {

constexpr double kReplayTol = 1e-9;

struct Context {
  bool quiet = false;
  void progress(const std::string& msg) const {
    if (!quiet) std::cerr << msg << '\n';
  }
};

void warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

int input_error(const std::string& msg) {
  std::cerr << "error: " << msg << '\n';
  return kExitInputError;
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::string full(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidParameter, what + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidParameter, what + ": empty list");
  return out;
}

void system_warnings(const ValidatedSystem& sys, const ScalarBounds& sb) {
  if (sys.system().m() < sys.system().n()) {
    warn("m < n: the covariance upper bound assumes C^T C >= c_lo^2 I, which cannot hold here; "
         "treat the bound as unverified and run verify-bounds");
  }
  if (sb.singular_dynamics()) warn("A is singular (a_lo = 0)");
  if (sb.k_hi >= 1.0) warn("closed loop A - BK is not contractive (k_hi >= 1); bounds will grow");
}

std::filesystem::path sibling(const std::filesystem::path& out, const std::string& suffix) {
  std::filesystem::path p = out;
  p.replace_filename(out.stem().string() + suffix);
  return p;
}

// ---- plan -------------------------------------------------------------------

struct PlanArgs {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> time_budget;
  std::optional<std::int64_t> max_iterations;
  std::optional<std::string> log_csv;
  std::int64_t log_every = 1000;
};

int cmd_plan(const PlanArgs& a, const Context& ctx) {
  const Scenario sc = load_scenario(a.scenario);
  PlannerParams params = sc.planner;
  if (a.seed) params.seed = *a.seed;
  if (a.time_budget) {
    params.time_budget = *a.time_budget;
    if (!a.max_iterations) params.max_iterations = 0;
  }
  if (a.max_iterations) {
    params.max_iterations = *a.max_iterations;
    if (!a.time_budget) params.time_budget = 0.0;
  }
  const ValidatedSystem sys = validate_system(sc.system);
  system_warnings(sys, derive_scalar_bounds(sys));

  Planner::Options opts;
  if (a.log_csv) opts.log_every = std::max<std::int64_t>(a.log_every, 0);
  Planner planner(sys, sc.environment, params, sc.initial_mean, sc.sigma0, sc.lambda0, opts);
  ctx.progress("planning (seed " + std::to_string(params.seed) + ")");
  const auto t0 = std::chrono::steady_clock::now();
  PlanResult result;
  try {
    result = planner.run();
  } catch (const NoSolution& e) {
    std::cout << "no solution: " << e.what() << '\n';
    return kExitNoSolution;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  PlanFile file{result.plan, Provenance{}, sc};
  file.provenance.scenario_hash = scenario_hash(sc);
  file.provenance.seed = params.seed;
  file.provenance.wall_time_s = wall;
  file.provenance.iterations = result.stats.iterations;
  file.provenance.tree_size = result.stats.tree_size;
  save_plan(file, a.out);
  if (a.log_csv) {
    std::ostringstream csv;
    csv << "iteration,elapsed_s,tree_size,best_cost\n";
    for (const CostEvent& e : result.improvements) {
      csv << e.iteration << ',' << fmt(e.elapsed_s) << ',' << e.tree_size << ',';
      if (std::isfinite(e.best_cost)) csv << full(e.best_cost);
      csv << '\n';
    }
    write_text_file(*a.log_csv, csv.str());
  }
  std::cout << "best cost " << fmt(result.plan.expected_cost) << ", horizon " << result.plan.horizon
            << ", tree size " << result.stats.tree_size << ", iterations " << result.stats.iterations << '\n';
  return kExitOk;
}

// ---- simulate ---------------------------------------------------------------

struct SimArgs {
  std::string plan;
  std::string out;
  std::optional<std::string> scenario;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  int trace_runs = 50;
};

double initial_deviation(const PlanFile& f) {
  const Scenario& sc = f.scenario;
  const METCPlan& p = f.plan;
  if (p.sigma0.rows() != sc.sigma0.rows() || p.nominal_states.front().size() != sc.initial_mean.size()) {
    return std::numeric_limits<double>::infinity();
  }
  const BoundState b0 = init_bounds(sc.sigma0, sc.lambda0);
  const BoundState& s0 = p.bounds.front();
  return std::max({(p.nominal_states.front() - sc.initial_mean).cwiseAbs().maxCoeff(),
                   (p.sigma0 - sc.sigma0).cwiseAbs().maxCoeff(), (p.lambda0 - sc.lambda0).cwiseAbs().maxCoeff(),
                   std::abs(b0.lambda_bar - s0.lambda_bar), std::abs(b0.p_bar - s0.p_bar),
                   std::abs(b0.p_lo - s0.p_lo), std::abs(p.cost_cm - sc.planner.cost_cm)});
}

int cmd_simulate(const SimArgs& a, const Context& ctx) {
  const PlanFile file = load_plan(a.plan);
  if (a.scenario) {
    const Scenario given = load_scenario(*a.scenario);
    if (scenario_hash(given) != file.provenance.scenario_hash) {
      return input_error("scenario " + *a.scenario + " does not match the plan (hash " + scenario_hash(given) +
                         " vs " + file.provenance.scenario_hash + ")");
    }
  }
  const ValidatedSystem sys = validate_system(file.scenario.system);
  const ScalarBounds sb = derive_scalar_bounds(sys);
  const double dev = std::max(replay_deviation(file.plan, sys, sb), initial_deviation(file));
  if (!(dev <= kReplayTol)) {
    return input_error("replay check failed: stored plan deviates from re-propagation by " + fmt(dev));
  }

  const int runs = a.runs.value_or(file.scenario.simulation.runs);
  const std::uint64_t seed = a.seed.value_or(file.scenario.simulation.seed);
  if (runs < 1) return input_error("--runs must be at least 1");
  ctx.progress("simulating " + std::to_string(runs) + " rollouts");
  const SimStats stats =
      monte_carlo(file.plan, sys, file.scenario.environment, runs, seed, MonteCarloOptions{a.threads, a.trace_runs});

  Json j = sim_stats_to_json(stats);
  j["seed"] = seed;
  j["plan_expected_cost"] = file.plan.expected_cost;
  j["scenario_hash"] = file.provenance.scenario_hash;
  const std::filesystem::path out(a.out);
  write_text_file(out, j.dump(2) + "\n");

  std::ostringstream steps;
  steps << "step,delta,bound_total,trigger_rate,min_epsilon\n";
  for (std::size_t k = 0; k < file.plan.bounds.size(); ++k) {
    steps << k << ',' << (k == 0 ? std::string() : full(file.plan.deltas[k - 1].value())) << ','
          << full(file.plan.bounds[k].total()) << ','
          << (k == 0 ? std::string() : full(stats.per_step_trigger_rate[k - 1])) << ','
          << full(stats.per_step_min_epsilon[k]) << '\n';
  }
  write_text_file(sibling(out, "_steps.csv"), steps.str());
  std::ostringstream traces;
  traces << "run,step,epsilon\n";
  for (std::size_t r = 0; r < stats.epsilon_traces.size(); ++r) {
    for (std::size_t k = 0; k < stats.epsilon_traces[r].size(); ++k) {
      traces << r << ',' << k << ',' << full(stats.epsilon_traces[r][k]) << '\n';
    }
  }
  write_text_file(sibling(out, "_epsilon.csv"), traces.str());

  std::cout << "runs " << runs << ", collision fraction " << fmt(stats.collision_fraction) << ", goal fraction "
            << fmt(stats.goal_fraction) << ", mean cost " << fmt(stats.mean_cost) << " (expected "
            << fmt(file.plan.expected_cost) << "), min epsilon " << fmt(stats.min_epsilon_overall) << '\n';
  return kExitOk;
}

// ---- verify-bounds ----------------------------------------------------------

struct VerifyArgs {
  std::string scenario;
  int horizon = 12;
  std::string grid = "0.25,0.5,1,2,4";
  std::optional<std::string> out;
  double corrupt_lambda_scale = 1.0;
};

int cmd_verify_bounds(const VerifyArgs& a, const Context& ctx) {
  if (a.horizon < 1 || a.horizon > kMaxEnumerationHorizon) {
    return input_error("--horizon must lie in [1, " + std::to_string(kMaxEnumerationHorizon) + "]");
  }
  const Scenario sc = load_scenario(a.scenario);
  const std::vector<double> grid = parse_list(a.grid, "--delta-grid");
  for (double d : grid) {
    if (!(d > 0.0) || !std::isfinite(d)) return input_error("--delta-grid entries must be positive");
  }
  const ValidatedSystem sys = validate_system(sc.system);
  const ScalarBounds sb = derive_scalar_bounds(sys);
  system_warnings(sys, sb);

  struct Sequence {
    std::string label;
    std::vector<Threshold> deltas;
  };
  std::vector<Sequence> sequences;
  for (double d : grid) {
    sequences.push_back({"constant " + fmt(d), std::vector<Threshold>(static_cast<std::size_t>(a.horizon), Threshold(d))});
  }
  if (grid.size() > 1) {
    Sequence mixed{"cyclic", {}};
    for (int k = 0; k < a.horizon; ++k) mixed.deltas.emplace_back(grid[static_cast<std::size_t>(k) % grid.size()]);
    sequences.push_back(std::move(mixed));
  }

  std::ostringstream csv;
  csv << "sequence,step,gamma_prefix,epsilon_min\n";
  bool all_pass = true;
  for (const Sequence& s : sequences) {
    std::vector<BoundState> bounds = propagate_bounds(init_bounds(sc.sigma0, sc.lambda0), sb, s.deltas);
    for (BoundState& b : bounds) b.lambda_bar *= a.corrupt_lambda_scale;
    const DominanceReport rep = check_bound_dominates(sys, sc.sigma0, sc.lambda0, s.deltas, a.horizon, a.out.has_value(),
                                                      std::span<const BoundState>(bounds));
    all_pass = all_pass && rep.pass;
    std::cout << (rep.pass ? "PASS " : "FAIL ") << s.label << ": min epsilon " << fmt(rep.epsilon_min)
              << " (step " << rep.worst_step << ", prefix " << rep.worst_prefix << ")\n";
    for (const DominanceRow& r : rep.rows) {
      csv << s.label << ',' << r.step << ',' << r.gamma_prefix_id << ',' << full(r.epsilon_min) << '\n';
    }
  }
  if (a.out) write_text_file(*a.out, csv.str());
  ctx.progress(all_pass ? "all sequences bounded" : "bound violation detected");
  return all_pass ? kExitOk : kExitBoundFailure;
}

// ---- benchmark --------------------------------------------------------------

struct BenchArgs {
  std::optional<std::string> scenario;
  std::optional<int> random_envs;
  std::string budgets = "10,60";
  std::optional<int> trials;
  std::uint64_t seed = 1;
  std::string unit = "seconds";
  std::string out;
  int threads = 0;
};

int cmd_benchmark(const BenchArgs& a, const Context& ctx) {
  BenchmarkConfig cfg;
  cfg.budgets = parse_list(a.budgets, "--budgets");
  cfg.seed = a.seed;
  if (a.unit == "seconds") {
    cfg.unit = BudgetUnit::Seconds;
  } else if (a.unit == "iterations") {
    cfg.unit = BudgetUnit::Iterations;
  } else {
    return input_error("--unit must be seconds or iterations");
  }
  if (a.random_envs) {
    if (*a.random_envs < 1) return input_error("--random-envs must be at least 1");
    if (a.trials && *a.trials != *a.random_envs) {
      return input_error("--random-envs K runs one trial per environment; --trials must be omitted or equal K");
    }
    cfg.trials = *a.random_envs;
    cfg.random_envs = RandomEnvParams{};
  } else {
    if (!a.scenario) return input_error("benchmark needs a scenario file or --random-envs");
    cfg.trials = a.trials.value_or(20);
  }
  cfg.threads = a.threads > 0 ? a.threads : default_thread_count();

  std::optional<Scenario> base;
  if (a.scenario) {
    base.emplace(load_scenario(*a.scenario));
  } else {
    RandomEnvParams p;
    p.seed = cfg.seed;
    base.emplace(default_scenario(random_environment(p), "random"));
  }
  ctx.progress("benchmark: " + std::to_string(cfg.trials) + " trials, budgets " + a.budgets + " " + a.unit);
  const BenchmarkResult res = run_benchmark(*base, cfg);
  for (const BenchmarkTrial& t : res.trials) {
    for (const std::string& w : t.warnings) warn("trial " + std::to_string(t.index) + ": " + w);
  }

  std::ostringstream csv;
  csv << "# mean_cost and std_error are over solved trials; std_error = sample std / sqrt(solved)\n";
  csv << "budget,unit,trials,solved,no_solution,mean_cost,std_error\n";
  std::cout << std::left << std::setw(12) << "budget" << std::setw(10) << "solved" << "cost (mean +- std error)\n";
  for (const BenchmarkRow& r : res.rows) {
    csv << full(r.budget) << ',' << a.unit << ',' << r.trials << ',' << r.solved << ',' << r.trials - r.solved << ','
        << (r.solved ? full(r.mean_cost) : std::string()) << ',' << (r.solved ? full(r.std_error) : std::string())
        << '\n';
    std::cout << std::setw(12) << (fmt(r.budget) + (cfg.unit == BudgetUnit::Seconds ? " s" : ""))
              << std::setw(10) << (std::to_string(r.solved) + "/" + std::to_string(r.trials))
              << (r.solved ? fmt(r.mean_cost, 5) + " +- " + fmt(r.std_error, 3) : "-") << '\n';
  }
  write_text_file(a.out, csv.str());
  return kExitOk;
}

// ---- gen-env ----------------------------------------------------------------

struct GenArgs {
  RandomEnvParams params;
  std::string out;
  std::string name = "random";
};

int cmd_gen_env(const GenArgs& a, const Context& ctx) {
  const GeneratedEnvironment g = random_environment(a.params);
  for (const std::string& w : g.warnings) warn(w);
  save_scenario(default_scenario(g, a.name), a.out);
  ctx.progress("wrote " + a.out);
  return kExitOk;
}

}  // namespace

Scenario default_scenario(const GeneratedEnvironment& generated, const std::string& name) {
  LinearSystem sys;
  const Matrix I = Matrix::Identity(2, 2);
  sys.A = I;
  sys.B = I;
  sys.C = I;
  sys.Q = 0.01 * I;
  sys.R = 0.01 * I;
  sys.K = 0.5 * I;
  PlannerParams params;
  params.control_lo = Vector::Constant(2, -2.0);
  params.control_hi = Vector::Constant(2, 2.0);
  Vector start(2);
  start << generated.start(0), generated.start(1);
  return Scenario{name, sys, start, 0.01 * I, Matrix::Zero(2, 2), generated.env, params, SimulationParams{}};
}

BenchmarkResult run_benchmark(const Scenario& base, const BenchmarkConfig& cfg) {
  if (cfg.budgets.empty() || !std::is_sorted(cfg.budgets.begin(), cfg.budgets.end()) ||
      std::adjacent_find(cfg.budgets.begin(), cfg.budgets.end()) != cfg.budgets.end() || !(cfg.budgets.front() > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "budgets must be positive and strictly ascending");
  }
  if (cfg.trials < 1) throw Error(ErrorCode::InvalidParameter, "trials must be at least 1");
  const ValidatedSystem sys = validate_system(base.system);
  const std::uint64_t env_master = derive_seed(cfg.seed, ~0ULL);

  BenchmarkResult res;
  res.trials.resize(static_cast<std::size_t>(cfg.trials));
  std::atomic<int> next{0};
  const auto work = [&] {
    for (int i = next.fetch_add(1); i < cfg.trials; i = next.fetch_add(1)) {
      BenchmarkTrial& t = res.trials[static_cast<std::size_t>(i)];
      t.index = i;
      t.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
      t.best_cost.assign(cfg.budgets.size(), std::nullopt);
      PlannerParams params = base.planner;
      params.seed = t.seed;
      if (cfg.unit == BudgetUnit::Seconds) {
        params.time_budget = cfg.budgets.back();
        params.max_iterations = 0;
      } else {
        params.time_budget = 0.0;
        params.max_iterations = static_cast<std::int64_t>(std::llround(cfg.budgets.back()));
      }
      try {
        Vector start = base.initial_mean;
        std::optional<Environment> env;
        if (cfg.random_envs) {
          RandomEnvParams p = *cfg.random_envs;
          p.seed = derive_seed(env_master, static_cast<std::uint64_t>(i));
          GeneratedEnvironment g = random_environment(p);
          start.head<2>() = g.start;
          t.warnings = std::move(g.warnings);
          env.emplace(std::move(g.env));
        } else {
          env.emplace(base.environment);
        }
        Planner planner(sys, *env, params, start, base.sigma0, base.lambda0);
        const PlanResult r = planner.run();
        for (std::size_t b = 0; b < cfg.budgets.size(); ++b) {
          for (const CostEvent& e : r.improvements) {
            const double at = cfg.unit == BudgetUnit::Seconds ? e.elapsed_s : static_cast<double>(e.iteration);
            if (at <= cfg.budgets[b]) t.best_cost[b] = e.best_cost;
          }
        }
      } catch (const NoSolution&) {
      } catch (const Error& e) {
        t.warnings.push_back(e.what());
      }
    }
  };
  const int threads = std::clamp(cfg.threads, 1, cfg.trials);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  for (std::size_t b = 0; b < cfg.budgets.size(); ++b) {
    BenchmarkRow row;
    row.budget = cfg.budgets[b];
    row.trials = cfg.trials;
    double sum = 0.0;
    for (const BenchmarkTrial& t : res.trials) {
      if (t.best_cost[b]) {
        ++row.solved;
        sum += *t.best_cost[b];
      }
    }
    if (row.solved > 0) {
      row.mean_cost = sum / row.solved;
      double ss = 0.0;
      for (const BenchmarkTrial& t : res.trials) {
        if (t.best_cost[b]) ss += (*t.best_cost[b] - row.mean_cost) * (*t.best_cost[b] - row.mean_cost);
      }
      row.std_error = row.solved > 1 ? std::sqrt(ss / (row.solved - 1) / row.solved) : 0.0;
    }
    res.rows.push_back(row);
  }
  return res;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Motion and event-triggered communication planning for linear-Gaussian robots", "etgbt"};
  app.require_subcommand(1);
  Context ctx;
  app.add_flag("-q,--quiet", ctx.quiet, "Suppress progress output");

  PlanArgs plan_args;
  auto* plan = app.add_subcommand("plan", "Plan a trajectory and threshold schedule for a scenario");
  plan->add_option("scenario", plan_args.scenario, "Scenario JSON")->required();
  plan->add_option("-o,--out", plan_args.out, "Plan file to write")->required();
  plan->add_option("--seed", plan_args.seed, "Planner seed (overrides the scenario)");
  plan->add_option("--time-budget", plan_args.time_budget,
                   "Seconds; without --max-iterations the iteration cap is lifted");
  plan->add_option("--log-csv", plan_args.log_csv, "Anytime log: iteration, elapsed, tree size, best cost");
  plan->add_option("--log-every", plan_args.log_every, "Log interval in iterations, besides every improvement");
  plan->add_option("--max-iterations", plan_args.max_iterations,
                   "Iteration budget; without --time-budget the time cap is lifted");

  SimArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo validation of a plan file");
  sim->add_option("plan", sim_args.plan, "Plan file")->required();
  sim->add_option("-o,--out", sim_args.out, "Statistics JSON; CSV traces are written next to it")->required();
  sim->add_option("--scenario", sim_args.scenario, "Scenario that must match the plan's embedded hash");
  sim->add_option("--runs", sim_args.runs, "Number of rollouts (default: scenario)");
  sim->add_option("--seed", sim_args.seed, "Master seed (default: scenario)");
  sim->add_option("--threads", sim_args.threads, "Worker threads (default: ETGBT_THREADS or all cores)");
  sim->add_option("--trace-runs", sim_args.trace_runs, "Runs whose epsilon traces are exported");

  VerifyArgs ver_args;
  auto* ver = app.add_subcommand("verify-bounds", "Check the bound recursion against exhaustive enumeration");
  ver->add_option("scenario", ver_args.scenario, "Scenario JSON")->required();
  ver->add_option("--horizon", ver_args.horizon, "Enumeration horizon T (at most 20)");
  ver->add_option("--delta-grid", ver_args.grid, "Comma-separated thresholds");
  ver->add_option("-o,--out", ver_args.out, "Epsilon CSV");
  ver->add_option("--corrupt-lambda-scale", ver_args.corrupt_lambda_scale)->group("");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("benchmark", "Best cost versus planning budget over seeded trials");
  bench->add_option("scenario", bench_args.scenario, "Scenario JSON");
  bench->add_option("--random-envs", bench_args.random_envs, "One generated environment per trial, K trials");
  bench->add_option("--budgets", bench_args.budgets, "Comma-separated ascending budgets");
  bench->add_option("--unit", bench_args.unit, "seconds or iterations");
  bench->add_option("--trials", bench_args.trials, "Trials per budget (default 20)");
  bench->add_option("--seed", bench_args.seed, "Master seed");
  bench->add_option("--threads", bench_args.threads, "Concurrent trials (default: ETGBT_THREADS or all cores)");
  bench->add_option("-o,--out", bench_args.out, "Table CSV")->required();

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen-env", "Write a scenario with a randomly generated environment");
  gen->add_option("--count", gen_args.params.count, "Number of circular obstacles");
  gen->add_option("--center-low", gen_args.params.center_low);
  gen->add_option("--center-high", gen_args.params.center_high);
  gen->add_option("--radius-mean", gen_args.params.radius_mean);
  gen->add_option("--radius-std", gen_args.params.radius_std);
  gen->add_option("--goal-half-size", gen_args.params.goal_half_size);
  gen->add_option("--seed", gen_args.params.seed);
  gen->add_option("--name", gen_args.name);
  gen->add_option("-o,--out", gen_args.out, "Scenario file to write")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*plan) return cmd_plan(plan_args, ctx);
    if (*sim) return cmd_simulate(sim_args, ctx);
    if (*ver) return cmd_verify_bounds(ver_args, ctx);
    if (*bench) return cmd_benchmark(bench_args, ctx);
    if (*gen) return cmd_gen_env(gen_args, ctx);
  } catch (const Error& e) {
    return input_error(e.what());
  } catch (const std::exception& e) {
    return input_error(e.what());
  }
  return kExitInputError;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace etgbt::cli
