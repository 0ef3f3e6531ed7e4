#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "etgbt/environment.hpp"
#include "etgbt/model.hpp"
#include "etgbt/planner.hpp"
#include "etgbt/simulate.hpp"

namespace etgbt {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kBuildId = "etgbt-1.0.0";

struct SimulationParams {
  int runs = 3000;
  std::uint64_t seed = 7;
};

struct Scenario {
  std::string name;
  LinearSystem system;
  Vector initial_mean;
  Matrix sigma0;
  Matrix lambda0;
  Environment environment;
  PlannerParams planner;
  SimulationParams simulation;
};

/// Parses and validates a scenario document. Errors carry the JSON field path
/// (e.g. "system.A") and are raised as Error(ScenarioInvalid).
Scenario scenario_from_json(const Json& doc);
Json scenario_to_json(const Scenario& scenario);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

/// FNV-1a 64 of the canonical serialization, as 16 hex digits.
std::string scenario_hash(const Scenario& scenario);

Json environment_to_json(const Environment& env);
Environment environment_from_json(const Json& doc, const std::string& path = "environment");

struct Provenance {
  std::string scenario_hash;
  std::uint64_t seed = 0;
  std::string build = kBuildId;
  double wall_time_s = 0.0;
  std::int64_t iterations = 0;
  std::size_t tree_size = 0;
};

struct PlanFile {
  METCPlan plan;
  Provenance provenance;
  Scenario scenario;
};

Json plan_to_json(const PlanFile& file);
PlanFile plan_from_json(const Json& doc);

void save_plan(const PlanFile& file, const std::filesystem::path& path);
PlanFile load_plan(const std::filesystem::path& path);

Json sim_stats_to_json(const SimStats& stats);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace etgbt
