#include "sse/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace sse {

namespace {

using json = nlohmann::json;

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

GridCell read_cell(const json& value, const char* key) {
  if (!value.is_array() || value.size() != 2) {
    throw ConfigInvalid(std::string("config: '") + key + "' must be [row, col]");
  }
  return {value.at(0).get<int>(), value.at(1).get<int>()};
}

void parse_scene(const json& s, AppConfig& cfg) {
  std::string type = "synthetic";
  read(s, "type", type);
  if (type == "synthetic") {
    read(s, "K", cfg.scene.endmembers);
    read(s, "bands", cfg.scene.bands);
    read(s, "highres_w", cfg.scene.highres_w);
    read(s, "highres_h", cfg.scene.highres_h);
    read(s, "downsample", cfg.scene.downsample);
    read(s, "noise_sigma", cfg.scene.noise_sigma);
    read(s, "blur_radius", cfg.scene.blur_radius);
    read(s, "seed", cfg.scene.seed);
    read(s, "grid_stride", cfg.scene.grid_stride);
    read(s, "step_cost", cfg.scene.step_cost);
    read(s, "name", cfg.scene.name);
  } else if (type == "files") {
    SceneLoadOptions opts;
    read(s, "downsample", opts.downsample);
    read(s, "noise_sigma", opts.noise_sigma);
    read(s, "grid_stride", opts.grid_stride);
    read(s, "step_cost", opts.step_cost);
    read(s, "name", opts.name);
    cfg.scene_files = opts;
    read(s, "orbital", cfg.orbital_path);
    read(s, "insitu", cfg.insitu_path);
    if (cfg.orbital_path.empty() || cfg.insitu_path.empty()) {
      throw ConfigInvalid("config: scene type 'files' needs 'orbital' and 'insitu' paths");
    }
  } else {
    throw ConfigInvalid("config: scene type must be 'synthetic' or 'files', got '" + type + "'");
  }
}

}  // namespace

SceneryPair AppConfig::make_scene(std::uint64_t seed) const {
  if (scene_files) {
    return load_scene(orbital_path, insitu_path, *scene_files);
  }
  return generate_synthetic_scene(scene, seed);
}

AppConfig parse_config_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(origin + ": " + e.what());
  }
  if (!root.is_object()) throw ConfigInvalid(origin + ": top level must be an object");

  AppConfig cfg;
  if (root.contains("scene")) parse_scene(root.at("scene"), cfg);

  if (root.contains("solver")) {
    const json& s = root.at("solver");
    read(s, "tolerance", cfg.solver.tolerance);
    read(s, "sum_to_one", cfg.solver.sum_to_one);
    read(s, "asc_weight", cfg.solver.asc_weight);
    read(s, "max_iterations", cfg.solver.max_iterations);
  }
  if (root.contains("reward")) {
    const json& s = root.at("reward");
    read(s, "kernel_sigma_f", cfg.reward.kernel_sigma_f);
    if (s.contains("kernel_lengthscale")) {
      const json& v = s.at("kernel_lengthscale");
      if (v.is_string()) {
        if (v.get<std::string>() != "median") {
          throw ConfigInvalid("config: kernel_lengthscale must be a number or \"median\"");
        }
        cfg.reward.kernel_lengthscale = 0.0;
      } else {
        cfg.reward.kernel_lengthscale = v.get<double>();
      }
    }
    read(s, "kernel_noise", cfg.reward.kernel_noise);
    read(s, "tau", cfg.reward.tau);
  }
  if (root.contains("mcts")) {
    const json& s = root.at("mcts");
    read(s, "iterations", cfg.mcts.iterations);
    read(s, "max_depth", cfg.mcts.max_depth);
    read(s, "gamma", cfg.mcts.gamma);
    read(s, "kappa", cfg.mcts.kappa);
    read(s, "epsilon", cfg.mcts.epsilon);
    read(s, "rollout_avoid_backtrack", cfg.mcts.rollout_avoid_backtrack);
  }
  if (root.contains("gss")) {
    const json& s = root.at("gss");
    if (s.contains("path_budget")) cfg.gss.path_budget = s.at("path_budget").get<double>();
    if (s.contains("goal")) cfg.gss.goal = read_cell(s.at("goal"), "gss.goal");
    read(s, "waypoint_stride", cfg.gss.waypoint_stride);
  }
  if (root.contains("experiment")) {
    const json& s = root.at("experiment");
    read(s, "trials", cfg.experiment.trials);
    read(s, "seed", cfg.experiment.seed);
    read(s, "jobs", cfg.experiment.jobs);
    read(s, "measure_time", cfg.experiment.measure_time);
    read(s, "planners", cfg.experiment.planners);
    read(s, "fixed_stride", cfg.experiment.fixed_stride);
    std::string mode = "samples";
    read(s, "budget_mode", mode);
    if (mode == "samples") {
      cfg.experiment.budget.mode = SamplingBudget::Mode::Samples;
    } else if (mode == "path_length") {
      cfg.experiment.budget.mode = SamplingBudget::Mode::PathCost;
    } else {
      throw ConfigInvalid("config: budget_mode must be 'samples' or 'path_length'");
    }
    read(s, "budget", cfg.experiment.budget.value);
    std::string ttest = "welch";
    read(s, "ttest", ttest);
    if (ttest == "welch") {
      cfg.experiment.ttest = ExperimentConfig::TTest::Welch;
    } else if (ttest == "pooled") {
      cfg.experiment.ttest = ExperimentConfig::TTest::Pooled;
    } else {
      throw ConfigInvalid("config: ttest must be 'welch' or 'pooled'");
    }
    if (s.contains("start")) cfg.start = read_cell(s.at("start"), "experiment.start");
    read(s, "planner", cfg.plan_planner);
    if (s.contains("sweep")) {
      const json& sw = s.at("sweep");
      std::string axis;
      read(sw, "axis", axis);
      if (axis.empty()) throw ConfigInvalid("config: sweep needs an 'axis'");
      sweep_axis_from_name(axis);  // validates
      cfg.sweep_axis = axis;
      read(sw, "values", cfg.sweep_values);
      if (cfg.sweep_values.empty()) throw ConfigInvalid("config: sweep needs 'values'");
    }
  }
  cfg.experiment.gss_waypoint_stride = cfg.gss.waypoint_stride;
  return cfg;
}

AppConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string config_json(const AppConfig& cfg) {
  nlohmann::ordered_json j;
  if (cfg.scene_files) {
    j["scene"] = {{"type", "files"},
                  {"orbital", cfg.orbital_path},
                  {"insitu", cfg.insitu_path},
                  {"downsample", cfg.scene_files->downsample},
                  {"noise_sigma", cfg.scene_files->noise_sigma},
                  {"grid_stride", cfg.scene_files->grid_stride},
                  {"step_cost", cfg.scene_files->step_cost},
                  {"name", cfg.scene_files->name}};
  } else {
    j["scene"] = {{"type", "synthetic"},
                  {"K", cfg.scene.endmembers},
                  {"bands", cfg.scene.bands},
                  {"highres_w", cfg.scene.highres_w},
                  {"highres_h", cfg.scene.highres_h},
                  {"downsample", cfg.scene.downsample},
                  {"noise_sigma", cfg.scene.noise_sigma},
                  {"blur_radius", cfg.scene.blur_radius},
                  {"seed", cfg.scene.seed},
                  {"grid_stride", cfg.scene.grid_stride},
                  {"step_cost", cfg.scene.step_cost},
                  {"name", cfg.scene.name}};
  }
  j["solver"] = {{"tolerance", cfg.solver.tolerance},
                 {"sum_to_one", cfg.solver.sum_to_one},
                 {"asc_weight", cfg.solver.asc_weight},
                 {"max_iterations", cfg.solver.max_iterations}};
  j["reward"] = {{"kernel_sigma_f", cfg.reward.kernel_sigma_f},
                 {"kernel_noise", cfg.reward.kernel_noise},
                 {"tau", cfg.reward.tau}};
  if (cfg.reward.kernel_lengthscale > 0.0) {
    j["reward"]["kernel_lengthscale"] = cfg.reward.kernel_lengthscale;
  } else {
    j["reward"]["kernel_lengthscale"] = "median";
  }
  j["mcts"] = {{"iterations", cfg.mcts.iterations},
               {"max_depth", cfg.mcts.max_depth},
               {"gamma", cfg.mcts.gamma},
               {"kappa", cfg.mcts.kappa},
               {"epsilon", cfg.mcts.epsilon},
               {"rollout_avoid_backtrack", cfg.mcts.rollout_avoid_backtrack}};
  j["gss"] = nlohmann::ordered_json::object();
  if (cfg.gss.path_budget) j["gss"]["path_budget"] = *cfg.gss.path_budget;
  if (cfg.gss.goal) j["gss"]["goal"] = {cfg.gss.goal->row, cfg.gss.goal->col};
  j["gss"]["waypoint_stride"] = cfg.gss.waypoint_stride;
  j["experiment"] = {
      {"trials", cfg.experiment.trials},
      {"seed", cfg.experiment.seed},
      {"jobs", cfg.experiment.jobs},
      {"measure_time", cfg.experiment.measure_time},
      {"planners", cfg.experiment.planners},
      {"fixed_stride", cfg.experiment.fixed_stride},
      {"budget_mode",
       cfg.experiment.budget.mode == SamplingBudget::Mode::Samples ? "samples" : "path_length"},
      {"budget", cfg.experiment.budget.value},
      {"ttest", cfg.experiment.ttest == ExperimentConfig::TTest::Welch ? "welch" : "pooled"},
      {"planner", cfg.plan_planner}};
  if (cfg.start) j["experiment"]["start"] = {cfg.start->row, cfg.start->col};
  if (cfg.sweep_axis) {
    j["experiment"]["sweep"] = {{"axis", *cfg.sweep_axis}, {"values", cfg.sweep_values}};
  }
  return j.dump(2) + "\n";
}

}  // namespace sse
