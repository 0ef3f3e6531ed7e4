#pragma once

#include <optional>
#include <random>
#include <string>

#include "etgbt/environment.hpp"
#include "etgbt/error.hpp"
#include "etgbt/model.hpp"
#include "etgbt/planner.hpp"
#include "etgbt/scenario_io.hpp"
#include "oracles.hpp"

namespace fixtures {

using etgbt::LinearSystem;
using etgbt::Matrix;
using etgbt::Vector;

/// A = B = C = I, Q = R = 0.01 I, K = 0.5 I.
LinearSystem system_2d();

/// Scalar system with the given coefficients.
LinearSystem scalar_system(double a, double b, double c, double q, double r, double k);

/// Random 2x2 system with square well-conditioned C and ||A - BK|| < 1.
LinearSystem random_stable_2x2(std::mt19937_64& rng);

oracle::SmallSystem to_oracle(const LinearSystem& s);

/// Workspace [0,100]^2, no obstacles, goal box [80,92] x [44,56].
etgbt::Environment open_field();

/// Open field plus two rectangles leaving a gap of width 4 around y = 50 for
/// 40 <= x <= 60.
etgbt::Environment corridor();

/// Planner settings used throughout the tests (controls in [-2,2]^2).
etgbt::PlannerParams default_params();

/// Straight plan along +x from (10, 50) with constant control and threshold.
etgbt::METCPlan straight_plan(const etgbt::ValidatedSystem& sys, double ux, double delta, int horizon);

std::string scenario_path(const std::string& file);

}  // namespace fixtures

namespace fixtures {

/// Runs `f` and returns the ErrorCode it threw, or nullopt when it returned.
template <class F>
std::optional<etgbt::ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const etgbt::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace fixtures
