#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>

#include "sse/config.hpp"
#include "sse/eval.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CliOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> planner;
  std::optional<double> budget;
  std::optional<int> depth;
  std::optional<int> iterations;
};

sse::AppConfig resolve(const CliOptions& opts) {
  sse::AppConfig cfg = opts.config_path.empty() ? sse::AppConfig{} : sse::load_config(opts.config_path);
  // Flags override file values.
  if (opts.seed) {
    cfg.scene.seed = *opts.seed;
    cfg.experiment.seed = *opts.seed;
  }
  if (opts.jobs) cfg.experiment.jobs = *opts.jobs;
  if (opts.budget) cfg.experiment.budget.value = *opts.budget;
  if (opts.depth) cfg.mcts.max_depth = *opts.depth;
  if (opts.iterations) cfg.mcts.iterations = *opts.iterations;
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sse::IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw sse::IoError("write failed for " + path.string());
}

void write_manifest(const sse::AppConfig& cfg, const std::string& subcommand,
                    const fs::path& out_dir) {
  nlohmann::ordered_json j;
  j["artifact_version"] = kVersion;
  j["subcommand"] = subcommand;
  j["seed"] = cfg.experiment.seed;
  j["config"] = nlohmann::ordered_json::parse(sse::config_json(cfg));
  write_text(out_dir / "run_manifest.json", j.dump(2) + "\n");
}

sse::GridCell resolve_start(const sse::AppConfig& cfg, const sse::SceneryPair& scene,
                            std::uint64_t trial_seed) {
  if (cfg.start) {
    if (!scene.grid.in_bounds(*cfg.start)) throw sse::ConfigInvalid("start cell outside grid");
    return *cfg.start;
  }
  sse::RandomStream rng(sse::RandomStream::derive(trial_seed, 0));
  const int idx = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(scene.grid.cell_count()));
  return {idx / scene.grid.cols, idx % scene.grid.cols};
}

std::string axis_value_tag(double v) {
  if (v == static_cast<double>(static_cast<long long>(v))) {
    return std::to_string(static_cast<long long>(v));
  }
  std::string s = std::to_string(v);
  for (char& c : s) {
    if (c == '.') c = 'p';
  }
  return s;
}

int cmd_generate(const CliOptions& opts) {
  sse::AppConfig cfg = resolve(opts);
  const fs::path out_dir(opts.out_dir);
  fs::create_directories(out_dir);
  const std::uint64_t seed = cfg.scene.seed;
  const sse::SceneryPair scene = sse::generate_synthetic_scene(cfg.scene, seed);
  sse::save_scene(scene, (out_dir / "orbital.sser").string(), (out_dir / "insitu.sser").string());

  nlohmann::ordered_json meta;
  meta["name"] = scene.meta.name;
  meta["seed"] = scene.meta.seed;
  meta["endmembers"] = scene.meta.endmembers;
  meta["bands"] = scene.orbital.bands();
  meta["orbital_width"] = scene.orbital.width;
  meta["orbital_height"] = scene.orbital.height;
  meta["highres_width"] = scene.oracle.truth.width;
  meta["highres_height"] = scene.oracle.truth.height;
  meta["downsample"] = scene.meta.downsample;
  meta["noise_sigma"] = scene.oracle.noise_sigma;
  meta["grid_rows"] = scene.grid.rows;
  meta["grid_cols"] = scene.grid.cols;
  meta["grid_stride"] = scene.grid.stride;
  meta["step_cost"] = scene.grid.step_cost;
  write_text(out_dir / "scene_meta.json", meta.dump(2) + "\n");
  write_manifest(cfg, "generate", out_dir);

  std::cout << "wrote " << (out_dir / "orbital.sser").string() << ", "
            << (out_dir / "insitu.sser").string() << ", "
            << (out_dir / "scene_meta.json").string() << "\n";
  return 0;
}

int cmd_plan(const CliOptions& opts) {
  sse::AppConfig cfg = resolve(opts);
  if (opts.planner) cfg.plan_planner = *opts.planner;
  const fs::path out_dir(opts.out_dir);
  fs::create_directories(out_dir);

  const std::uint64_t seed = cfg.experiment.seed;
  const sse::SceneryPair scene = cfg.make_scene(seed);
  const std::uint64_t trial_seed = sse::RandomStream::derive(seed, 0);
  const sse::GridCell start = resolve_start(cfg, scene, trial_seed);
  sse::RandomStream rng(sse::RandomStream::derive(trial_seed, 1));

  const std::string& name = cfg.plan_planner;
  sse::PlannerOutcome outcome;
  if (name == "nmpse") {
    outcome = sse::nmpse_run(scene, start, cfg.experiment.budget, cfg.reward, cfg.mcts, rng);
  } else if (name == "fixed") {
    outcome = sse::fixed_step_plan(scene, start, cfg.experiment.budget,
                                   cfg.experiment.fixed_stride, rng);
  } else if (name == "random") {
    outcome = sse::random_plan(scene, start, cfg.experiment.budget, rng);
  } else if (name == "gss") {
    if (!cfg.gss.goal || !cfg.gss.path_budget) {
      throw sse::ConfigInvalid("plan: gss needs gss.goal and gss.path_budget in the config");
    }
    std::vector<sse::GridCell> waypoints;
    for (int r = 0; r < scene.grid.rows; r += cfg.gss.waypoint_stride) {
      for (int c = 0; c < scene.grid.cols; c += cfg.gss.waypoint_stride) {
        waypoints.push_back({r, c});
      }
    }
    auto ensure = [&](sse::GridCell c) {
      for (const auto& x : waypoints) {
        if (x == c) return;
      }
      waypoints.push_back(c);
    };
    ensure(start);
    ensure(*cfg.gss.goal);
    outcome = sse::gss_plan(scene, start, *cfg.gss.goal, *cfg.gss.path_budget, waypoints,
                            cfg.reward, rng);
  } else {
    throw sse::ConfigInvalid("plan: unknown planner '" + name + "'");
  }

  const double error = sse::scene_reconstruction_error(outcome.spectra, scene.orbital, cfg.solver);

  sse::TrialRecord rec;
  rec.trial = 0;
  rec.seed = trial_seed;
  rec.planner = name;
  rec.budget = cfg.experiment.budget.value;
  rec.path = outcome.cells;
  rec.final_error = error;
  rec.path_cost = outcome.path_cost;
  rec.mean_action_time_s = cfg.experiment.measure_time ? outcome.mean_step_time_s() : 0.0;
  sse::write_trace_json(rec, (out_dir / ("trace_" + name + ".json")).string());
  write_manifest(cfg, "plan", out_dir);

  nlohmann::ordered_json summary;
  summary["planner"] = name;
  summary["start"] = {start.row, start.col};
  summary["samples"] = outcome.cells.size();
  summary["final_error"] = error;
  summary["path_cost"] = outcome.path_cost;
  summary["mean_action_time_s"] = rec.mean_action_time_s;
  std::cout << summary.dump() << "\n";
  return 0;
}

int cmd_evaluate(const CliOptions& opts) {
  sse::AppConfig cfg = resolve(opts);
  if (opts.planner) {
    cfg.experiment.planners.clear();
    std::string list = *opts.planner;
    std::size_t pos = 0;
    while (pos <= list.size()) {
      const std::size_t comma = list.find(',', pos);
      const std::string item =
          comma == std::string::npos ? list.substr(pos) : list.substr(pos, comma - pos);
      if (!item.empty()) cfg.experiment.planners.push_back(item);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  const fs::path out_dir(opts.out_dir);
  fs::create_directories(out_dir);

  const sse::SceneryPair scene = cfg.make_scene(cfg.scene.seed);

  if (cfg.sweep_axis) {
    const sse::SweepAxis axis = sse::sweep_axis_from_name(*cfg.sweep_axis);
    const auto results = sse::sweep(scene, cfg.experiment, cfg.reward, cfg.mcts, cfg.solver, axis,
                                    cfg.sweep_values);
    for (const auto& r : results) {
      const std::string tag = *cfg.sweep_axis + axis_value_tag(r.axis_value);
      sse::write_trial_csv(r.records, (out_dir / ("trials_" + tag + ".csv")).string());
      sse::write_report_json(r.report, (out_dir / ("report_" + tag + ".json")).string());
      std::cout << "sweep " << tag << ": ";
      for (const auto& s : r.report.planners) {
        std::cout << s.planner << " mre=" << s.mre << " ";
      }
      std::cout << "\n";
    }
  } else {
    const auto records = sse::run_experiment(scene, cfg.experiment, cfg.reward, cfg.mcts, cfg.solver);
    sse::write_trial_csv(records, (out_dir / "trials.csv").string());
    const auto report = sse::build_report(records, cfg.experiment.planners, cfg.experiment.ttest);
    sse::write_report_json(report, (out_dir / "report.json").string());
    fs::create_directories(out_dir / "traces");
    for (const auto& rec : records) {
      const std::string name =
          "trial" + std::to_string(rec.trial) + "_" + rec.planner + ".json";
      sse::write_trace_json(rec, (out_dir / "traces" / name).string());
    }
    for (const auto& s : report.planners) {
      std::cout << s.planner << ": mre=" << s.mre << " stderr=" << s.std_error
                << " mean_action_time_s=" << s.mean_action_time_s << "\n";
    }
    for (const auto& p : report.pairs) {
      std::cout << p.a << " < " << p.b << ": t=" << p.t << " p=" << p.p
                << (p.significant ? " (significant)" : "") << "\n";
    }
  }
  write_manifest(cfg, "evaluate", out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatio-spectral exploration planner and benchmark"};
  app.require_subcommand(1);

  CliOptions opts;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "override scene and experiment seed");
    cmd->add_option("--jobs", opts.jobs, "parallel trial workers (0 = all cores)");
    cmd->add_option("--planner", opts.planner, "planner (evaluate: comma-separated list)");
    cmd->add_option("--budget", opts.budget, "sampling budget (samples or path cost)");
    cmd->add_option("--depth", opts.depth, "search max depth");
    cmd->add_option("--iterations", opts.iterations, "search iterations per action");
  };

  CLI::App* generate = app.add_subcommand("generate", "write a synthetic scene to disk");
  CLI::App* plan = app.add_subcommand("plan", "run one planner on one scene");
  CLI::App* evaluate = app.add_subcommand("evaluate", "run trials and comparison reports");
  add_common(generate);
  add_common(plan);
  add_common(evaluate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (generate->parsed()) return cmd_generate(opts);
    if (plan->parsed()) return cmd_plan(opts);
    if (evaluate->parsed()) return cmd_evaluate(opts);
  } catch (const sse::ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const sse::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const sse::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const sse::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
