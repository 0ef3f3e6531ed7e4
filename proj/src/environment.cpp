#include "etgbt/environment.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "etgbt/error.hpp"

namespace etgbt {

namespace {

double box_distance(const AxisBox& box, const Vec2& p) {
  const Vec2 closest = p.cwiseMax(box.lo).cwiseMin(box.hi);
  return (p - closest).norm();
}

bool disc_hits(const Obstacle& obs, const Vec2& center, double radius) {
  if (const auto* c = std::get_if<Circle>(&obs)) {
    return (center - c->center).norm() <= radius + c->radius;
  }
  return box_distance(std::get<AxisBox>(obs), center) <= radius;
}

void check_box(const AxisBox& b, const char* what) {
  if (!b.lo.allFinite() || !b.hi.allFinite() || !(b.lo.array() < b.hi.array()).all()) {
    throw Error(ErrorCode::InvalidParameter, std::string(what) + " needs lo < hi componentwise");
  }
}

}  // namespace

Environment::Environment(AxisBox workspace, std::vector<Obstacle> obstacles, GoalRegion goal)
    : workspace_(std::move(workspace)), obstacles_(std::move(obstacles)), goal_(std::move(goal)) {
  check_box(workspace_, "workspace");
  for (const auto& obs : obstacles_) {
    if (const auto* c = std::get_if<Circle>(&obs)) {
      if (!(c->radius > 0.0) || !c->center.allFinite()) {
        throw Error(ErrorCode::InvalidParameter, "circle obstacle needs a positive radius");
      }
    } else {
      check_box(std::get<AxisBox>(obs), "rectangle obstacle");
    }
  }
  if (const auto* g = std::get_if<AxisBox>(&goal_)) {
    check_box(*g, "goal");
    if (!workspace_.contains(g->lo) || !workspace_.contains(g->hi)) {
      throw Error(ErrorCode::InvalidParameter, "goal box must lie inside the workspace");
    }
    if (g->lo == workspace_.lo && g->hi == workspace_.hi) {
      throw Error(ErrorCode::InvalidParameter, "goal covers the whole workspace");
    }
  } else {
    const auto& c = std::get<Circle>(goal_);
    if (!(c.radius > 0.0)) throw Error(ErrorCode::InvalidParameter, "goal circle needs a positive radius");
    const Vec2 margin_lo = c.center - workspace_.lo;
    const Vec2 margin_hi = workspace_.hi - c.center;
    if (margin_lo.minCoeff() < c.radius || margin_hi.minCoeff() < c.radius) {
      throw Error(ErrorCode::InvalidParameter, "goal circle must lie inside the workspace");
    }
  }
}

bool Environment::sphere_obstacle_free(const Vec2& center, double radius) const {
  if ((center - workspace_.lo).minCoeff() < radius || (workspace_.hi - center).minCoeff() < radius) {
    return false;
  }
  for (const auto& obs : obstacles_) {
    if (disc_hits(obs, center, radius)) return false;
  }
  return true;
}

bool Environment::sphere_in_goal(const Vec2& center, double radius) const {
  if (const auto* g = std::get_if<AxisBox>(&goal_)) {
    return (center - g->lo).minCoeff() >= radius && (g->hi - center).minCoeff() >= radius;
  }
  const auto& c = std::get<Circle>(goal_);
  return (center - c.center).norm() + radius <= c.radius;
}

bool Environment::point_in_obstacle(const Vec2& point) const { return !sphere_obstacle_free(point, 0.0); }

void validate(const RandomEnvParams& p) {
  if (p.count < 1) throw Error(ErrorCode::InvalidParameter, "obstacle count must be >= 1");
  if (!(p.center_high > p.center_low)) throw Error(ErrorCode::InvalidParameter, "center range is empty");
  if (!(p.radius_mean > 0.0) || !(p.radius_std >= 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "radius distribution needs mean > 0 and std >= 0");
  }
  if (!(p.goal_half_size > 0.0) || 2.0 * p.goal_half_size >= p.center_high - p.center_low) {
    throw Error(ErrorCode::InvalidParameter, "goal half size must be positive and fit the workspace");
  }
}

GeneratedEnvironment random_environment(const RandomEnvParams& p) {
  validate(p);
  std::vector<std::string> warnings;
  if (!(p.radius_mean > 3.0 * p.radius_std)) {
    warnings.emplace_back("radius_mean <= 3 radius_std: many radii will sit on the 0.5 floor");
  }
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> center_dist(p.center_low, p.center_high);
  std::normal_distribution<double> radius_dist(p.radius_mean, p.radius_std);

  std::vector<Circle> circles;
  circles.reserve(static_cast<std::size_t>(p.count));
  for (int i = 0; i < p.count; ++i) {
    Circle c;
    c.center = Vec2(center_dist(rng), center_dist(rng));
    c.radius = std::max(kMinRandomRadius, radius_dist(rng));
    circles.push_back(c);
  }

  const AxisBox workspace{Vec2::Constant(p.center_low), Vec2::Constant(p.center_high)};
  const double width = p.center_high - p.center_low;
  const double clearance = 2.0 * p.radius_mean;
  std::uniform_real_distribution<double> place(p.center_low + p.goal_half_size, p.center_high - p.goal_half_size);

  const auto clear = [&](const Vec2& pt) {
    for (const auto& c : circles) {
      if ((pt - c.center).norm() < clearance) return false;
    }
    return true;
  };

  for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
    const Vec2 start(place(rng), place(rng));
    const Vec2 goal_center(place(rng), place(rng));
    if ((start - goal_center).norm() < 0.5 * width) continue;
    if (!clear(start) || !clear(goal_center)) continue;
    const AxisBox goal{goal_center.array() - p.goal_half_size, goal_center.array() + p.goal_half_size};
    bool goal_free = true;
    for (const auto& c : circles) {
      if (box_distance(goal, c.center) <= c.radius) {
        goal_free = false;
        break;
      }
    }
    if (!goal_free) continue;
    std::vector<Obstacle> obstacles(circles.begin(), circles.end());
    return GeneratedEnvironment{Environment(workspace, std::move(obstacles), goal), start, std::move(warnings)};
  }
  std::ostringstream os;
  os << "no start/goal placement found after " << kPlacementAttempts << " attempts (seed " << p.seed << ")";
  throw Error(ErrorCode::PlacementFailure, os.str());
}

}  // namespace etgbt
