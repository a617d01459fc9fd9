#pragma once

#include <optional>
#include <string>

#include "sse/eval.hpp"
#include "sse/raster_io.hpp"
#include "sse/scene_gen.hpp"

namespace sse {

struct GssConfig {
  std::optional<double> path_budget;   // required for standalone gss planning
  std::optional<GridCell> goal;        // same
  int waypoint_stride = 1;
};

/// Resolved configuration for one run. Parsed from a JSON file with the
/// sections scene / solver / reward / mcts / gss / experiment; every key is
/// optional and falls back to the defaults visible in the struct fields.
struct AppConfig {
  // Exactly one scene source; synthetic with defaults when absent.
  SceneConfig scene;
  std::optional<SceneLoadOptions> scene_files;  // set when scene.type == "files"
  std::string orbital_path;
  std::string insitu_path;

  SolverOptions solver;
  RewardParams reward;
  MctsParams mcts;
  GssConfig gss;
  ExperimentConfig experiment;

  std::optional<GridCell> start;               // fixed start cell for `plan`
  std::string plan_planner = "nmpse";          // planner used by `plan`
  std::optional<std::string> sweep_axis;
  std::vector<double> sweep_values;

  SceneryPair make_scene(std::uint64_t seed) const;
};

AppConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
AppConfig load_config(const std::string& path);

/// Resolved configuration echoed back as JSON (written into run manifests).
std::string config_json(const AppConfig& cfg);

}  // namespace sse
