#include "sse/eval.hpp"

#include <omp.h>

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace sse {

namespace {

constexpr double kAlpha = 0.05;

double mean_of(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double variance_of(std::span<const double> xs, double mean) {
  double s = 0.0;
  for (double x : xs) s += (x - mean) * (x - mean);
  return s / static_cast<double>(xs.size() - 1);
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw ConfigInvalid("experiment: trials must be >= 1");
  if (cfg.planners.empty()) throw ConfigInvalid("experiment: no planners configured");
  int nmpse_at = -1;
  for (std::size_t i = 0; i < cfg.planners.size(); ++i) {
    const std::string& p = cfg.planners[i];
    if (p != "nmpse" && p != "gss" && p != "fixed" && p != "random") {
      throw ConfigInvalid("experiment: unknown planner '" + p + "'");
    }
    if (p == "nmpse") nmpse_at = static_cast<int>(i);
    if (p == "gss" && nmpse_at < 0) {
      throw ConfigInvalid("experiment: gss needs a paired nmpse run listed before it");
    }
  }
  if (cfg.fixed_stride < 1) throw ConfigInvalid("experiment: fixed_stride must be >= 1");
  if (cfg.gss_waypoint_stride < 1) throw ConfigInvalid("experiment: gss_waypoint_stride must be >= 1");
}

std::vector<GridCell> gss_waypoints(const SceneryPair& scene, int stride, GridCell start,
                                    GridCell goal) {
  std::vector<GridCell> w;
  for (int r = 0; r < scene.grid.rows; r += stride) {
    for (int c = 0; c < scene.grid.cols; c += stride) {
      w.push_back({r, c});
    }
  }
  auto ensure = [&](GridCell c) {
    for (const GridCell& x : w) {
      if (x == c) return;
    }
    w.push_back(c);
  };
  ensure(start);
  ensure(goal);
  return w;
}

}  // namespace

std::vector<TrialRecord> run_experiment(const SceneryPair& scene, const ExperimentConfig& cfg,
                                        const RewardParams& reward, const MctsParams& mcts,
                                        const SolverOptions& solver) {
  validate(cfg);
  const int planner_count = static_cast<int>(cfg.planners.size());
  std::vector<TrialRecord> records(static_cast<std::size_t>(cfg.trials * planner_count));
  std::exception_ptr failure = nullptr;

#pragma omp parallel for schedule(dynamic) num_threads(cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads())
  for (int trial = 0; trial < cfg.trials; ++trial) {
    try {
      const std::uint64_t trial_seed = RandomStream::derive(cfg.seed, static_cast<std::uint64_t>(trial));
      RandomStream start_rng(RandomStream::derive(trial_seed, 0));
      const int cell_index = static_cast<int>(start_rng.next_u64() %
                                              static_cast<std::uint64_t>(scene.grid.cell_count()));
      const GridCell start{cell_index / scene.grid.cols, cell_index % scene.grid.cols};

      std::optional<PlannerOutcome> nmpse_outcome;
      for (int p = 0; p < planner_count; ++p) {
        const std::string& name = cfg.planners[static_cast<std::size_t>(p)];
        RandomStream rng(RandomStream::derive(trial_seed, static_cast<std::uint64_t>(p) + 1));

        PlannerOutcome outcome;
        double budget_value = cfg.budget.value;
        if (name == "nmpse") {
          outcome = nmpse_run(scene, start, cfg.budget, reward, mcts, rng);
          nmpse_outcome = outcome;
        } else if (name == "fixed") {
          outcome = fixed_step_plan(scene, start, cfg.budget, cfg.fixed_stride, rng);
        } else if (name == "random") {
          outcome = random_plan(scene, start, cfg.budget, rng);
        } else {  // gss, paired with the nmpse run
          const GridCell goal = nmpse_outcome->end_cell();
          budget_value = nmpse_outcome->path_cost;
          const auto waypoints = gss_waypoints(scene, cfg.gss_waypoint_stride, start, goal);
          outcome = gss_plan(scene, start, goal, budget_value, waypoints, reward, rng);
        }

        TrialRecord rec;
        rec.trial = trial;
        rec.seed = trial_seed;
        rec.planner = name;
        rec.budget = budget_value;
        rec.path = outcome.cells;
        rec.final_error = scene_reconstruction_error(outcome.spectra, scene.orbital, solver);
        rec.path_cost = outcome.path_cost;
        if (cfg.measure_time) {
          rec.action_times_s = outcome.step_times_s;
          rec.mean_action_time_s = outcome.mean_step_time_s();
        }
        records[static_cast<std::size_t>(trial * planner_count + p)] = std::move(rec);
      }
    } catch (const std::exception& e) {
#pragma omp critical
      if (!failure) {
        failure = std::make_exception_ptr(
            Error("trial " + std::to_string(trial) + " failed: " + e.what()));
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

double mean_reconstruction_error(const std::vector<TrialRecord>& records,
                                 const std::string& planner) {
  std::vector<double> errors;
  for (const TrialRecord& r : records) {
    if (r.planner == planner) errors.push_back(r.final_error);
  }
  if (errors.empty()) throw ConfigInvalid("no records for planner '" + planner + "'");
  return mean_of(errors);
}

std::pair<double, double> one_tailed_welch_test(std::span<const double> a,
                                                std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw DegenerateSample("t-test: need >= 2 samples per side");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  const double va = variance_of(a, ma);
  const double vb = variance_of(b, mb);
  const double se2 = va / na + vb / nb;
  if (se2 <= 0.0) {
    if (ma == mb) throw DegenerateSample("t-test: zero variance and equal means");
    const double inf = std::numeric_limits<double>::infinity();
    return {ma < mb ? -inf : inf, ma < mb ? 0.0 : 1.0};
  }
  const double t = (ma - mb) / std::sqrt(se2);
  const double df = se2 * se2 / ((va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0));
  const boost::math::students_t dist(df);
  return {t, boost::math::cdf(dist, t)};
}

std::pair<double, double> one_tailed_pooled_test(std::span<const double> a,
                                                 std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw DegenerateSample("t-test: need >= 2 samples per side");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  const double va = variance_of(a, ma);
  const double vb = variance_of(b, mb);
  const double sp2 = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
  const double se2 = sp2 * (1.0 / na + 1.0 / nb);
  if (se2 <= 0.0) {
    if (ma == mb) throw DegenerateSample("t-test: zero variance and equal means");
    const double inf = std::numeric_limits<double>::infinity();
    return {ma < mb ? -inf : inf, ma < mb ? 0.0 : 1.0};
  }
  const double t = (ma - mb) / std::sqrt(se2);
  const boost::math::students_t dist(na + nb - 2.0);
  return {t, boost::math::cdf(dist, t)};
}

ComparisonReport build_report(const std::vector<TrialRecord>& records,
                              const std::vector<std::string>& planners,
                              ExperimentConfig::TTest ttest) {
  ComparisonReport report;
  std::vector<std::vector<double>> errors(planners.size());
  for (std::size_t i = 0; i < planners.size(); ++i) {
    std::vector<double> times;
    for (const TrialRecord& r : records) {
      if (r.planner != planners[i]) continue;
      errors[i].push_back(r.final_error);
      times.push_back(r.mean_action_time_s);
    }
    if (errors[i].empty()) throw ConfigInvalid("no records for planner '" + planners[i] + "'");
    PlannerSummary s;
    s.planner = planners[i];
    s.mre = mean_of(errors[i]);
    s.std_error = errors[i].size() > 1
                      ? std::sqrt(variance_of(errors[i], s.mre) / static_cast<double>(errors[i].size()))
                      : 0.0;
    s.mean_action_time_s = mean_of(times);
    report.planners.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < planners.size(); ++i) {
    for (std::size_t j = i + 1; j < planners.size(); ++j) {
      PairTest pt;
      pt.a = planners[i];
      pt.b = planners[j];
      const auto [t, p] = ttest == ExperimentConfig::TTest::Welch
                              ? one_tailed_welch_test(errors[i], errors[j])
                              : one_tailed_pooled_test(errors[i], errors[j]);
      pt.t = t;
      pt.p = p;
      pt.significant = p < kAlpha;
      report.pairs.push_back(std::move(pt));
    }
  }
  return report;
}

SweepAxis sweep_axis_from_name(const std::string& name) {
  if (name == "depth") return SweepAxis::Depth;
  if (name == "samples") return SweepAxis::Samples;
  if (name == "path_length") return SweepAxis::PathLength;
  throw ConfigInvalid("sweep: unknown axis '" + name + "' (depth|samples|path_length)");
}

std::string sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Depth: return "depth";
    case SweepAxis::Samples: return "samples";
    case SweepAxis::PathLength: return "path_length";
  }
  return "?";
}

std::vector<SweepResult> sweep(const SceneryPair& scene, const ExperimentConfig& cfg,
                               const RewardParams& reward, const MctsParams& mcts,
                               const SolverOptions& solver, SweepAxis axis,
                               const std::vector<double>& values) {
  if (values.empty()) throw ConfigInvalid("sweep: no axis values");
  std::vector<SweepResult> results;
  for (double v : values) {
    ExperimentConfig c = cfg;
    MctsParams m = mcts;
    switch (axis) {
      case SweepAxis::Depth:
        m.max_depth = static_cast<int>(v);
        break;
      case SweepAxis::Samples:
        c.budget = SamplingBudget::samples(static_cast<int>(v));
        break;
      case SweepAxis::PathLength:
        c.budget = SamplingBudget::path_cost(v);
        break;
    }
    SweepResult r;
    r.axis_value = v;
    r.records = run_experiment(scene, c, reward, m, solver);
    r.report = build_report(r.records, c.planners, c.ttest);
    results.push_back(std::move(r));
  }
  return results;
}

std::string trial_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  out << "trial,seed,planner,budget,final_error,path_cost,mean_action_time_s\n";
  for (const TrialRecord& r : records) {
    out << r.trial << ',' << r.seed << ',' << r.planner << ',' << format_double(r.budget) << ','
        << format_double(r.final_error) << ',' << format_double(r.path_cost) << ','
        << format_double(r.mean_action_time_s) << '\n';
  }
  return out.str();
}

void write_trial_csv(const std::vector<TrialRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << trial_csv(records);
  if (!out) throw IoError("write failed for " + path);
}

std::vector<TrialRecord> read_trial_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  if (line != "trial,seed,planner,budget,final_error,path_cost,mean_action_time_s") {
    throw ParseError(path + ": unexpected header");
  }
  std::vector<TrialRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(pos));
        break;
      }
      fields.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    if (fields.size() != 7) {
      throw ParseError(path + ": line " + std::to_string(line_no) + ": expected 7 fields");
    }
    auto to_double = [&](const std::string& s) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) {
        throw ParseError(path + ": line " + std::to_string(line_no) + ": bad number '" + s + "'");
      }
      return v;
    };
    TrialRecord r;
    r.trial = static_cast<int>(to_double(fields[0]));
    r.seed = std::stoull(fields[1]);
    r.planner = fields[2];
    r.budget = to_double(fields[3]);
    r.final_error = to_double(fields[4]);
    r.path_cost = to_double(fields[5]);
    r.mean_action_time_s = to_double(fields[6]);
    records.push_back(std::move(r));
  }
  return records;
}

std::string report_json(const ComparisonReport& report) {
  nlohmann::ordered_json j;
  j["planners"] = nlohmann::ordered_json::array();
  for (const PlannerSummary& s : report.planners) {
    j["planners"].push_back({{"planner", s.planner},
                             {"mre", s.mre},
                             {"std_error", s.std_error},
                             {"mean_action_time_s", s.mean_action_time_s}});
  }
  j["pairs"] = nlohmann::ordered_json::array();
  for (const PairTest& p : report.pairs) {
    j["pairs"].push_back(
        {{"a", p.a}, {"b", p.b}, {"t", p.t}, {"p", p.p}, {"significant", p.significant}});
  }
  return j.dump(2) + "\n";
}

void write_report_json(const ComparisonReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << report_json(report);
  if (!out) throw IoError("write failed for " + path);
}

std::string trace_json(const TrialRecord& record) {
  nlohmann::ordered_json j;
  j["trial"] = record.trial;
  j["seed"] = record.seed;
  j["planner"] = record.planner;
  j["path"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < record.path.size(); ++i) {
    const GridCell c = record.path[i];
    std::string action = "start";
    if (i > 0) {
      const int a = action_between(record.path[i - 1], c);
      action = a >= 0 ? action_name(a) : "jump";
    }
    j["path"].push_back({{"step", i},
                         {"cell_row", c.row},
                         {"cell_col", c.col},
                         {"action", action}});
  }
  return j.dump(2) + "\n";
}

void write_trace_json(const TrialRecord& record, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << trace_json(record);
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace sse
