#include "fixtures.hpp"

#include "etgbt/bounds.hpp"

namespace fixtures {

using namespace etgbt;

LinearSystem system_2d() {
  const Matrix I = Matrix::Identity(2, 2);
  return LinearSystem{I, I, I, 0.01 * I, 0.01 * I, 0.5 * I};
}

LinearSystem scalar_system(double a, double b, double c, double q, double r, double k) {
  const auto s = [](double v) { return Matrix::Constant(1, 1, v); };
  return LinearSystem{s(a), s(b), s(c), s(q), s(r), s(k)};
}

LinearSystem random_stable_2x2(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto rnd = [&] {
    Matrix M(2, 2);
    M << u(rng), u(rng), u(rng), u(rng);
    return M;
  };
  const auto spd = [&](double scale) {
    const Matrix G = rnd();
    return Matrix(scale * (G * G.transpose() + 0.2 * Matrix::Identity(2, 2)));
  };
  LinearSystem s;
  s.A = Matrix::Identity(2, 2) + 0.3 * rnd();
  s.B = Matrix::Identity(2, 2);
  Matrix F = rnd();
  const double norm = F.jacobiSvd().singularValues()(0);
  F *= (0.2 + 0.7 * std::abs(u(rng))) / norm;
  s.K = s.A - F;
  s.C = Matrix::Identity(2, 2) + 0.4 * rnd();
  while (s.C.jacobiSvd().singularValues()(1) < 0.3) s.C = Matrix::Identity(2, 2) + 0.4 * rnd();
  s.Q = spd(0.01);
  s.R = spd(0.01);
  return s;
}

oracle::SmallSystem to_oracle(const LinearSystem& s) { return {s.A, s.B, s.C, s.Q, s.R, s.K}; }

Environment open_field() { return Environment(AxisBox{{0, 0}, {100, 100}}, {}, AxisBox{{80, 44}, {92, 56}}); }

Environment corridor() {
  return Environment(AxisBox{{0, 0}, {100, 100}},
                     {AxisBox{{40, 0}, {60, 48}}, AxisBox{{40, 52}, {60, 100}}}, AxisBox{{80, 44}, {92, 56}});
}

PlannerParams default_params() {
  PlannerParams p;
  p.control_lo = Vector::Constant(2, -2.0);
  p.control_hi = Vector::Constant(2, 2.0);
  return p;
}

METCPlan straight_plan(const ValidatedSystem& sys, double ux, double delta, int horizon) {
  const ScalarBounds sb = derive_scalar_bounds(sys);
  METCPlan plan;
  plan.m = sys.system().m();
  plan.sigma0 = 0.01 * Matrix::Identity(2, 2);
  plan.lambda0 = Matrix::Zero(2, 2);
  Vector x(2);
  x << 10.0, 50.0;
  Vector u(2);
  u << ux, 0.0;
  BoundState b = init_bounds(plan.sigma0, plan.lambda0);
  plan.nominal_states.push_back(x);
  plan.bounds.push_back(b);
  for (int k = 0; k < horizon; ++k) {
    x = sys.system().A * x + sys.system().B * u;
    b = bound_step(b, sb, Threshold(delta));
    plan.nominal_states.push_back(x);
    plan.nominal_controls.push_back(u);
    plan.deltas.emplace_back(delta);
    plan.bounds.push_back(b);
  }
  plan.horizon = horizon;
  plan.expected_cost = plan_cost(plan.deltas, plan.m, plan.cost_cm);
  return plan;
}

std::string scenario_path(const std::string& file) { return std::string(ETGBT_SCENARIO_DIR) + "/" + file; }

}  // namespace fixtures
