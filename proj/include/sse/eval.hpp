#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sse/planners.hpp"
#include "sse/scene_error.hpp"

namespace sse {

struct ExperimentConfig {
  int trials = 50;
  std::uint64_t seed = 0;
  SamplingBudget budget;
  std::vector<std::string> planners{"nmpse", "fixed", "random"};
  int jobs = 0;              // 0: library default thread count
  bool measure_time = true;  // off: record 0 for bit-reproducible outputs
  enum class TTest { Welch, Pooled };
  TTest ttest = TTest::Welch;
  int fixed_stride = 1;
  int gss_waypoint_stride = 1;
};

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  std::string planner;
  double budget = 0.0;
  std::vector<GridCell> path;
  double final_error = 0.0;
  double path_cost = 0.0;
  std::vector<double> action_times_s;
  double mean_action_time_s = 0.0;
};

struct PlannerSummary {
  std::string planner;
  double mre = 0.0;
  double std_error = 0.0;  // standard error of the per-trial errors
  double mean_action_time_s = 0.0;
};

struct PairTest {
  std::string a, b;  // hypothesis: mean error of a < mean error of b
  double t = 0.0;
  double p = 1.0;
  bool significant = false;  // p < 0.05
};

struct ComparisonReport {
  std::vector<PlannerSummary> planners;
  std::vector<PairTest> pairs;
};

/// Runs every configured planner from a shared per-trial start cell and
/// scores the collected in-situ library against the orbital image. When GSS
/// is configured it receives the paired NMPSE run's end cell and realised
/// path cost, so "nmpse" must appear earlier in the planner list. Trials are
/// independent and run in parallel; all randomness derives from
/// (cfg.seed, trial, planner), so results do not depend on scheduling.
std::vector<TrialRecord> run_experiment(const SceneryPair& scene, const ExperimentConfig& cfg,
                                        const RewardParams& reward, const MctsParams& mcts,
                                        const SolverOptions& solver);

double mean_reconstruction_error(const std::vector<TrialRecord>& records,
                                 const std::string& planner);

/// Welch's unequal-variance t statistic and the one-tailed p-value for the
/// hypothesis mean(a) < mean(b).
std::pair<double, double> one_tailed_welch_test(std::span<const double> a,
                                                std::span<const double> b);

/// Pooled-variance variant (classic two-sample t), same one-tailed reading.
std::pair<double, double> one_tailed_pooled_test(std::span<const double> a,
                                                 std::span<const double> b);

ComparisonReport build_report(const std::vector<TrialRecord>& records,
                              const std::vector<std::string>& planners,
                              ExperimentConfig::TTest ttest = ExperimentConfig::TTest::Welch);

enum class SweepAxis { Depth, Samples, PathLength };

SweepAxis sweep_axis_from_name(const std::string& name);
std::string sweep_axis_name(SweepAxis axis);

struct SweepResult {
  double axis_value = 0.0;
  std::vector<TrialRecord> records;
  ComparisonReport report;
};

/// Reruns the experiment once per axis value, holding everything else fixed.
std::vector<SweepResult> sweep(const SceneryPair& scene, const ExperimentConfig& cfg,
                               const RewardParams& reward, const MctsParams& mcts,
                               const SolverOptions& solver, SweepAxis axis,
                               const std::vector<double>& values);

/// Trial CSV: header trial,seed,planner,budget,final_error,path_cost,
/// mean_action_time_s, one row per (trial, planner). Numbers are written in
/// shortest round-trip form, so rewriting parsed records is byte-stable.
std::string trial_csv(const std::vector<TrialRecord>& records);
void write_trial_csv(const std::vector<TrialRecord>& records, const std::string& path);
std::vector<TrialRecord> read_trial_csv(const std::string& path);

std::string report_json(const ComparisonReport& report);
void write_report_json(const ComparisonReport& report, const std::string& path);

std::string trace_json(const TrialRecord& record);
void write_trace_json(const TrialRecord& record, const std::string& path);

}  // namespace sse
