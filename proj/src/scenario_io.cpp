#include "etgbt/scenario_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "etgbt/error.hpp"

namespace etgbt {

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ScenarioInvalid, path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) invalid(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) invalid(join(path, key), "missing");
  return *it;
}

const Json* optional_field(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) invalid(path, "expected an object");
  const auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) invalid(path, "expected a number");
  return j.get<double>();
}

std::int64_t integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) invalid(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::uint64_t unsigned_integer(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    invalid(path, "expected a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

Vector vector_of(const Json& j, const std::string& path, Eigen::Index expected = -1) {
  if (!j.is_array()) invalid(path, "expected an array of numbers");
  if (expected >= 0 && static_cast<Eigen::Index>(j.size()) != expected) {
    invalid(path, "expected " + std::to_string(expected) + " entries, got " + std::to_string(j.size()));
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

// Row-major nested arrays.
Matrix matrix_of(const Json& j, const std::string& path, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    invalid(path, "expected " + std::to_string(rows) + " rows");
  }
  Matrix M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    M.row(r) = vector_of(j[static_cast<std::size_t>(r)], path + "[" + std::to_string(r) + "]", cols).transpose();
  }
  return M;
}

Json to_json(const Vector& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Json to_json(const Matrix& M) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) j.push_back(to_json(Vector(M.row(r).transpose())));
  return j;
}

Json to_json(const Vec2& v) { return Json::array({v(0), v(1)}); }

Vec2 vec2_of(const Json& j, const std::string& path) { return vector_of(j, path, 2); }

Json shape_to_json(const Circle& c) {
  return Json{{"type", "circle"}, {"center", to_json(c.center)}, {"radius", c.radius}};
}
Json shape_to_json(const AxisBox& b) { return Json{{"type", "box"}, {"lo", to_json(b.lo)}, {"hi", to_json(b.hi)}}; }

std::variant<Circle, AxisBox> shape_of(const Json& j, const std::string& path) {
  const Json& type = require(j, "type", path);
  if (!type.is_string()) invalid(join(path, "type"), "expected a string");
  const auto t = type.get<std::string>();
  if (t == "circle") {
    return Circle{vec2_of(require(j, "center", path), join(path, "center")),
                  number(require(j, "radius", path), join(path, "radius"))};
  }
  if (t == "box") {
    return AxisBox{vec2_of(require(j, "lo", path), join(path, "lo")), vec2_of(require(j, "hi", path), join(path, "hi"))};
  }
  invalid(join(path, "type"), "unknown shape '" + t + "' (expected circle or box)");
}

const char* containment_name(ContainmentRule rule) {
  return rule == ContainmentRule::ScaledVariance ? "scaled_variance" : "chi_square";
}

Json planner_to_json(const PlannerParams& p) {
  Json j{{"p_safe", p.p_safe},
         {"cost_cm", p.cost_cm},
         {"delta_min", p.delta_min},
         {"delta_max", p.delta_max},
         {"steps_min", p.steps_min},
         {"steps_max", p.steps_max},
         {"selection_radius", p.selection_radius},
         {"witness_radius", p.witness_radius},
         {"goal_bias", p.goal_bias},
         {"max_iterations", p.max_iterations},
         {"time_budget", p.time_budget},
         {"seed", p.seed},
         {"control_lo", to_json(p.control_lo)},
         {"control_hi", to_json(p.control_hi)},
         {"containment", containment_name(p.containment)}};
  if (p.aux_state_lo.size() > 0) {
    j["aux_state_lo"] = to_json(p.aux_state_lo);
    j["aux_state_hi"] = to_json(p.aux_state_hi);
  }
  return j;
}

PlannerParams planner_of(const Json& j, const LinearSystem& sys, const std::string& path) {
  PlannerParams p;
  if (!j.is_object()) invalid(path, "expected an object");
  const auto num = [&](const char* key, double& out) {
    if (const Json* f = optional_field(j, key, path)) out = number(*f, join(path, key));
  };
  const auto int_field = [&](const char* key, auto& out) {
    if (const Json* f = optional_field(j, key, path)) out = static_cast<std::decay_t<decltype(out)>>(integer(*f, join(path, key)));
  };
  num("p_safe", p.p_safe);
  num("cost_cm", p.cost_cm);
  num("delta_min", p.delta_min);
  num("delta_max", p.delta_max);
  int_field("steps_min", p.steps_min);
  int_field("steps_max", p.steps_max);
  num("selection_radius", p.selection_radius);
  num("witness_radius", p.witness_radius);
  num("goal_bias", p.goal_bias);
  int_field("max_iterations", p.max_iterations);
  num("time_budget", p.time_budget);
  if (const Json* f = optional_field(j, "seed", path)) p.seed = unsigned_integer(*f, join(path, "seed"));
  p.control_lo = vector_of(require(j, "control_lo", path), join(path, "control_lo"), sys.p());
  p.control_hi = vector_of(require(j, "control_hi", path), join(path, "control_hi"), sys.p());
  const Eigen::Index aux = sys.n() - kPositionalDims;
  if (aux > 0) {
    p.aux_state_lo = vector_of(require(j, "aux_state_lo", path), join(path, "aux_state_lo"), aux);
    p.aux_state_hi = vector_of(require(j, "aux_state_hi", path), join(path, "aux_state_hi"), aux);
  }
  if (const Json* f = optional_field(j, "containment", path)) {
    const std::string name = f->is_string() ? f->get<std::string>() : "";
    if (name == "chi_square") {
      p.containment = ContainmentRule::ChiSquare;
    } else if (name == "scaled_variance") {
      p.containment = ContainmentRule::ScaledVariance;
    } else {
      invalid(join(path, "containment"), "expected \"chi_square\" or \"scaled_variance\"");
    }
  }
  try {
    p.validate(sys);
  } catch (const Error& e) {
    invalid(path, e.what());
  }
  return p;
}

}  // namespace

Json environment_to_json(const Environment& env) {
  Json obstacles = Json::array();
  for (const Obstacle& o : env.obstacles()) {
    obstacles.push_back(std::visit([](const auto& s) { return shape_to_json(s); }, o));
  }
  return Json{{"workspace", {{"lo", to_json(env.workspace().lo)}, {"hi", to_json(env.workspace().hi)}}},
              {"obstacles", obstacles},
              {"goal", std::visit([](const auto& s) { return shape_to_json(s); }, env.goal())}};
}

Environment environment_from_json(const Json& doc, const std::string& path) {
  const Json& ws = require(doc, "workspace", path);
  const std::string ws_path = join(path, "workspace");
  AxisBox workspace{vec2_of(require(ws, "lo", ws_path), join(ws_path, "lo")),
                    vec2_of(require(ws, "hi", ws_path), join(ws_path, "hi"))};
  std::vector<Obstacle> obstacles;
  if (const Json* list = optional_field(doc, "obstacles", path)) {
    if (!list->is_array()) invalid(join(path, "obstacles"), "expected an array");
    for (std::size_t i = 0; i < list->size(); ++i) {
      const std::string p = join(path, "obstacles") + "[" + std::to_string(i) + "]";
      std::visit([&](const auto& s) { obstacles.emplace_back(s); }, shape_of((*list)[i], p));
    }
  }
  GoalRegion goal;
  std::visit([&](const auto& s) { goal = s; }, shape_of(require(doc, "goal", path), join(path, "goal")));
  try {
    return Environment(workspace, std::move(obstacles), goal);
  } catch (const Error& e) {
    invalid(path, e.what());
  }
}

Scenario scenario_from_json(const Json& doc) {
  if (!doc.is_object()) invalid("(root)", "expected an object");
  const Json& version = require(doc, "schema_version", "");
  if (integer(version, "schema_version") != kSchemaVersion) {
    invalid("schema_version", "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  std::string name;
  if (const Json* f = optional_field(doc, "name", "")) {
    if (!f->is_string()) invalid("name", "expected a string");
    name = f->get<std::string>();
  }

  const Json& s = require(doc, "system", "");
  const auto dim = [&](const char* key) {
    const std::int64_t v = integer(require(s, key, "system"), join("system", key));
    if (v < 1 || v > 64) invalid(join("system", key), "must lie in [1, 64]");
    return static_cast<Eigen::Index>(v);
  };
  const Eigen::Index n = dim("n"), p = dim("p"), m = dim("m");
  LinearSystem sys;
  sys.A = matrix_of(require(s, "A", "system"), "system.A", n, n);
  sys.B = matrix_of(require(s, "B", "system"), "system.B", n, p);
  sys.C = matrix_of(require(s, "C", "system"), "system.C", m, n);
  sys.Q = matrix_of(require(s, "Q", "system"), "system.Q", n, n);
  sys.R = matrix_of(require(s, "R", "system"), "system.R", m, m);
  sys.K = matrix_of(require(s, "K", "system"), "system.K", p, n);
  try {
    validate_system(sys);
  } catch (const Error& e) {
    invalid("system", e.what());
  }

  const Json& init = require(doc, "initial", "");
  Vector mean = vector_of(require(init, "mean", "initial"), "initial.mean", n);
  Matrix sigma0 = matrix_of(require(init, "sigma0", "initial"), "initial.sigma0", n, n);
  Matrix lambda0 = Matrix::Zero(n, n);
  if (const Json* f = optional_field(init, "lambda0", "initial")) lambda0 = matrix_of(*f, "initial.lambda0", n, n);
  try {
    (void)init_bounds(sigma0, lambda0);
  } catch (const Error& e) {
    invalid("initial", e.what());
  }

  Environment env = environment_from_json(require(doc, "environment", ""), "environment");
  PlannerParams planner = planner_of(require(doc, "planner", ""), sys, "planner");

  SimulationParams sim;
  if (const Json* f = optional_field(doc, "simulation", "")) {
    if (const Json* r = optional_field(*f, "runs", "simulation")) {
      const std::int64_t runs = integer(*r, "simulation.runs");
      if (runs < 1 || runs > 100000000) invalid("simulation.runs", "must lie in [1, 1e8]");
      sim.runs = static_cast<int>(runs);
    }
    if (const Json* r = optional_field(*f, "seed", "simulation")) sim.seed = unsigned_integer(*r, "simulation.seed");
  }
  return Scenario{std::move(name), std::move(sys),  std::move(mean), std::move(sigma0), std::move(lambda0),
                  std::move(env),  std::move(planner), sim};
}

Json scenario_to_json(const Scenario& sc) {
  const LinearSystem& s = sc.system;
  return Json{{"schema_version", kSchemaVersion},
              {"name", sc.name},
              {"system",
               {{"n", s.n()},
                {"p", s.p()},
                {"m", s.m()},
                {"A", to_json(s.A)},
                {"B", to_json(s.B)},
                {"C", to_json(s.C)},
                {"Q", to_json(s.Q)},
                {"R", to_json(s.R)},
                {"K", to_json(s.K)}}},
              {"initial", {{"mean", to_json(sc.initial_mean)}, {"sigma0", to_json(sc.sigma0)}, {"lambda0", to_json(sc.lambda0)}}},
              {"environment", environment_to_json(sc.environment)},
              {"planner", planner_to_json(sc.planner)},
              {"simulation", {{"runs", sc.simulation.runs}, {"seed", sc.simulation.seed}}}};
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ScenarioInvalid, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::InvalidParameter, "cannot write " + path.string());
}

namespace {

Json parse_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ScenarioInvalid, path.string() + ": malformed JSON (" + e.what() + ")");
  }
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path) { return scenario_from_json(parse_file(path)); }

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  write_text_file(path, scenario_to_json(scenario).dump(2) + "\n");
}

std::string scenario_hash(const Scenario& scenario) {
  const std::string canonical = scenario_to_json(scenario).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json plan_to_json(const PlanFile& file) {
  const METCPlan& p = file.plan;
  Json states = Json::array(), controls = Json::array(), deltas = Json::array(), bounds = Json::array();
  for (const Vector& x : p.nominal_states) states.push_back(to_json(x));
  for (const Vector& u : p.nominal_controls) controls.push_back(to_json(u));
  for (const Threshold& d : p.deltas) deltas.push_back(d.value());
  for (const BoundState& b : p.bounds) bounds.push_back(Json::array({b.lambda_bar, b.p_bar, b.p_lo}));
  const Provenance& pv = file.provenance;
  return Json{{"schema_version", kSchemaVersion},
              {"provenance",
               {{"scenario_hash", pv.scenario_hash},
                {"seed", pv.seed},
                {"build", pv.build},
                {"wall_time_s", pv.wall_time_s},
                {"iterations", pv.iterations},
                {"tree_size", pv.tree_size}}},
              {"plan",
               {{"horizon", p.horizon},
                {"m", p.m},
                {"cost_cm", p.cost_cm},
                {"expected_cost", p.expected_cost},
                {"sigma0", to_json(p.sigma0)},
                {"lambda0", to_json(p.lambda0)},
                {"nominal_states", states},
                {"nominal_controls", controls},
                {"deltas", deltas},
                {"bounds", bounds}}},
              {"scenario", scenario_to_json(file.scenario)}};
}

PlanFile plan_from_json(const Json& doc) {
  if (!doc.is_object()) invalid("(root)", "expected an object");
  if (integer(require(doc, "schema_version", ""), "schema_version") != kSchemaVersion) {
    invalid("schema_version", "unsupported version");
  }
  Scenario scenario = scenario_from_json(require(doc, "scenario", ""));
  const Eigen::Index n = scenario.system.n(), pdim = scenario.system.p();

  const Json& pv = require(doc, "provenance", "");
  Provenance prov;
  const Json& hash = require(pv, "scenario_hash", "provenance");
  if (!hash.is_string()) invalid("provenance.scenario_hash", "expected a string");
  prov.scenario_hash = hash.get<std::string>();
  prov.seed = unsigned_integer(require(pv, "seed", "provenance"), "provenance.seed");
  if (const Json* b = optional_field(pv, "build", "provenance"); b && b->is_string()) prov.build = b->get<std::string>();
  if (const Json* w = optional_field(pv, "wall_time_s", "provenance")) prov.wall_time_s = number(*w, "provenance.wall_time_s");
  if (const Json* w = optional_field(pv, "iterations", "provenance")) prov.iterations = integer(*w, "provenance.iterations");
  if (const Json* w = optional_field(pv, "tree_size", "provenance")) {
    prov.tree_size = static_cast<std::size_t>(unsigned_integer(*w, "provenance.tree_size"));
  }
  if (prov.scenario_hash != scenario_hash(scenario)) {
    invalid("provenance.scenario_hash", "does not match the embedded scenario");
  }

  const Json& pj = require(doc, "plan", "");
  METCPlan plan;
  const std::int64_t horizon = integer(require(pj, "horizon", "plan"), "plan.horizon");
  if (horizon < 0 || horizon > 100000000) invalid("plan.horizon", "out of range");
  plan.horizon = static_cast<int>(horizon);
  plan.m = static_cast<int>(integer(require(pj, "m", "plan"), "plan.m"));
  if (plan.m != scenario.system.m()) invalid("plan.m", "does not match the scenario's measurement dimension");
  plan.cost_cm = number(require(pj, "cost_cm", "plan"), "plan.cost_cm");
  plan.expected_cost = number(require(pj, "expected_cost", "plan"), "plan.expected_cost");
  plan.sigma0 = matrix_of(require(pj, "sigma0", "plan"), "plan.sigma0", n, n);
  plan.lambda0 = matrix_of(require(pj, "lambda0", "plan"), "plan.lambda0", n, n);

  const auto T = static_cast<std::size_t>(plan.horizon);
  const auto list = [&](const char* key, std::size_t count) -> const Json& {
    const Json& j = require(pj, key, "plan");
    if (!j.is_array() || j.size() != count) {
      invalid(join("plan", key), "expected " + std::to_string(count) + " entries");
    }
    return j;
  };
  const Json& states = list("nominal_states", T + 1);
  const Json& controls = list("nominal_controls", T);
  const Json& deltas = list("deltas", T);
  const Json& bounds = list("bounds", T + 1);
  for (std::size_t k = 0; k <= T; ++k) {
    const std::string idx = "[" + std::to_string(k) + "]";
    plan.nominal_states.push_back(vector_of(states[k], "plan.nominal_states" + idx, n));
    const Vector b = vector_of(bounds[k], "plan.bounds" + idx, 3);
    plan.bounds.push_back(BoundState{b(0), b(1), b(2), static_cast<int>(k)});
    if (k == T) break;
    plan.nominal_controls.push_back(vector_of(controls[k], "plan.nominal_controls" + idx, pdim));
    const double d = number(deltas[k], "plan.deltas" + idx);
    if (!(d > 0.0) || !std::isfinite(d)) invalid("plan.deltas" + idx, "threshold must be positive and finite");
    plan.deltas.emplace_back(d);
  }
  return PlanFile{std::move(plan), std::move(prov), std::move(scenario)};
}

void save_plan(const PlanFile& file, const std::filesystem::path& path) {
  write_text_file(path, plan_to_json(file).dump(2) + "\n");
}

PlanFile load_plan(const std::filesystem::path& path) { return plan_from_json(parse_file(path)); }

Json sim_stats_to_json(const SimStats& s) {
  return Json{{"runs", s.runs},
              {"collision_fraction", s.collision_fraction},
              {"goal_fraction", s.goal_fraction},
              {"mean_cost", s.mean_cost},
              {"std_cost", s.std_cost},
              {"min_epsilon_overall", s.min_epsilon_overall},
              {"per_step_trigger_rate", s.per_step_trigger_rate},
              {"per_step_min_epsilon", s.per_step_min_epsilon}};
}

}  // namespace etgbt
