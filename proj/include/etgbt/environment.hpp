#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace etgbt {

using Vec2 = Eigen::Vector2d;

struct Circle {
  Vec2 center = Vec2::Zero();
  double radius = 1.0;
};

struct AxisBox {
  Vec2 lo = Vec2::Zero();
  Vec2 hi = Vec2::Ones();

  bool contains(const Vec2& p) const {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  }
};

using Obstacle = std::variant<Circle, AxisBox>;
using GoalRegion = std::variant<AxisBox, Circle>;

/// Planar workspace. Only the first two state coordinates are positional;
/// everything else is unconstrained by the geometry.
class Environment {
 public:
  /// Validates radii, box orientation, goal inside workspace and goal not
  /// covering the whole workspace. Throws InvalidParameter.
  Environment(AxisBox workspace, std::vector<Obstacle> obstacles, GoalRegion goal);

  const AxisBox& workspace() const { return workspace_; }
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  const GoalRegion& goal() const { return goal_; }

  /// Disc inside the workspace and touching no (closed) obstacle.
  bool sphere_obstacle_free(const Vec2& center, double radius) const;

  /// Disc is a subset of the goal region (boundary inclusive).
  bool sphere_in_goal(const Vec2& center, double radius) const;

  /// Point inside some closed obstacle, or outside the workspace.
  bool point_in_obstacle(const Vec2& point) const;

  bool point_in_goal(const Vec2& point) const { return sphere_in_goal(point, 0.0); }

 private:
  AxisBox workspace_;
  std::vector<Obstacle> obstacles_;
  GoalRegion goal_;
};

struct RandomEnvParams {
  int count = 15;
  double center_low = 0.0;
  double center_high = 100.0;
  double radius_mean = 10.0;
  double radius_std = 2.0;
  double goal_half_size = 5.0;
  std::uint64_t seed = 0;
};

inline constexpr double kMinRandomRadius = 0.5;
inline constexpr int kPlacementAttempts = 10000;

struct GeneratedEnvironment {
  Environment env;
  Vec2 start;
  std::vector<std::string> warnings;
};

/// Circular obstacles with centers uniform on [center_low, center_high]^2 and
/// radii N(radius_mean, radius_std^2) floored at 0.5, inside the workspace
/// [center_low, center_high]^2. Start and goal-box centers are resampled until
/// both lie at least 2 radius_mean from every obstacle center, the goal box
/// touches no obstacle, and the two are at least half the workspace width
/// apart. Throws PlacementFailure after 1e4 attempts.
GeneratedEnvironment random_environment(const RandomEnvParams& params);

/// Throws InvalidParameter on count < 1 or non-positive ranges.
void validate(const RandomEnvParams& params);

}  // namespace etgbt
