#include "sse/planners.hpp"

#include <chrono>
#include <limits>

namespace sse {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_start(const SceneryPair& scene, GridCell start) {
  if (!scene.grid.in_bounds(start)) {
    throw OutOfBounds("planner: start cell (" + std::to_string(start.row) + ", " +
                      std::to_string(start.col) + ") outside grid");
  }
}

void check_budget(const SamplingBudget& budget) {
  if (budget.mode == SamplingBudget::Mode::Samples && budget.value < 1.0) {
    throw ConfigInvalid("planner: sample budget must be >= 1");
  }
  if (budget.mode == SamplingBudget::Mode::PathCost && budget.value < 0.0) {
    throw ConfigInvalid("planner: path budget must be >= 0");
  }
}

// True while the budget admits one more move (and the sample it yields).
bool may_move(const SamplingBudget& budget, const SceneryPair& scene, int samples, int moves) {
  if (budget.mode == SamplingBudget::Mode::Samples) {
    return samples < static_cast<int>(budget.value);
  }
  return (moves + 1) * scene.grid.step_cost <= budget.value + 1e-9;
}

}  // namespace

double PlannerOutcome::mean_step_time_s() const {
  if (step_times_s.empty()) return 0.0;
  double sum = 0.0;
  for (double t : step_times_s) sum += t;
  return sum / static_cast<double>(step_times_s.size());
}

PlannerOutcome nmpse_run(const SceneryPair& scene, GridCell start, const SamplingBudget& budget,
                         const RewardParams& reward_params, const MctsParams& mcts_params,
                         RandomStream& rng) {
  check_start(scene, start);
  check_budget(budget);
  validate_mcts_params(mcts_params);

  const ExplorationMdp mdp(scene, reward_params, mcts_params.rollout_avoid_backtrack);
  PlannerOutcome out;
  out.cells.push_back(start);
  out.spectra.append(sample_in_situ(scene.oracle, start, rng), Provenance::InSitu);

  int moves = 0;
  while (may_move(budget, scene, static_cast<int>(out.cells.size()), moves)) {
    const ExplorationState root = mdp.make_root(out.cells, out.spectra);
    const auto t0 = Clock::now();
    const int action = mcts_search(root, mdp, mcts_params, rng);
    out.step_times_s.push_back(seconds_since(t0));

    const GridCell target = apply_action(out.cells.back(), action);
    out.cells.push_back(target);
    out.spectra.append(sample_in_situ(scene.oracle, target, rng), Provenance::InSitu);
    ++moves;
  }
  out.path_cost = moves * scene.grid.step_cost;
  return out;
}

PlannerOutcome gss_plan(const SceneryPair& scene, GridCell start, GridCell goal,
                        double path_budget, const std::vector<GridCell>& waypoints,
                        const RewardParams& reward_params, RandomStream& rng) {
  check_start(scene, start);
  check_start(scene, goal);
  const RewardParams params = resolve_reward_params(reward_params, scene);

  auto index_of = [&](GridCell c) {
    for (std::size_t i = 0; i < waypoints.size(); ++i) {
      if (waypoints[i] == c) return static_cast<int>(i);
    }
    return -1;
  };
  if (index_of(start) < 0) throw ConfigInvalid("gss: start cell not in waypoint set");
  if (index_of(goal) < 0) throw ConfigInvalid("gss: goal cell not in waypoint set");

  const double step_cost = scene.grid.step_cost;
  const double direct = chebyshev(start, goal) * step_cost;
  if (direct > path_budget + 1e-9) {
    throw InfeasibleBudget("gss: start-goal distance costs " + std::to_string(direct) +
                           ", budget is " + std::to_string(path_budget));
  }

  // Open tour from start to goal, grown by cheapest insertion.
  std::vector<GridCell> tour{start};
  if (!(goal == start)) tour.push_back(goal);
  double tour_cost = direct;

  std::vector<char> chosen(waypoints.size(), 0);
  chosen[static_cast<std::size_t>(index_of(start))] = 1;
  chosen[static_cast<std::size_t>(index_of(goal))] = 1;

  // Cheapest detour for inserting cell c into the current tour; returns the
  // earliest minimising position.
  auto insertion = [&](GridCell c) -> std::pair<double, std::size_t> {
    if (tour.size() == 1) {
      // Degenerate start == goal loop: out and back.
      return {2.0 * chebyshev(tour[0], c) * step_cost, 1};
    }
    double best = std::numeric_limits<double>::infinity();
    std::size_t at = 1;
    for (std::size_t j = 1; j < tour.size(); ++j) {
      const double delta = (chebyshev(tour[j - 1], c) + chebyshev(c, tour[j]) -
                            chebyshev(tour[j - 1], tour[j])) *
                           step_cost;
      if (delta < best) {
        best = delta;
        at = j;
      }
    }
    return {best, at};
  };

  PlannerOutcome out;
  for (;;) {
    // Remote spectra at the chosen cells, in selection order.
    Eigen::MatrixXd base(scene.orbital.bands(), 0);
    {
      std::vector<GridCell> picked;
      for (std::size_t i = 0; i < waypoints.size(); ++i) {
        if (chosen[i]) picked.push_back(waypoints[i]);
      }
      base.resize(Eigen::NoChange, static_cast<Eigen::Index>(picked.size()));
      for (std::size_t i = 0; i < picked.size(); ++i) {
        base.col(static_cast<Eigen::Index>(i)) = scene.orbital_spectrum(picked[i]);
      }
    }
    const EntropyExtender extender(base, params.kernel_sigma_f, params.kernel_lengthscale,
                                   params.kernel_noise);

    const auto t0 = Clock::now();
    std::vector<double> scores(waypoints.size(), -std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < static_cast<int>(waypoints.size()); ++i) {
      if (chosen[static_cast<std::size_t>(i)]) continue;
      scores[static_cast<std::size_t>(i)] =
          extender.entropy_with(scene.orbital_spectrum(waypoints[static_cast<std::size_t>(i)]));
    }
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < waypoints.size(); ++i) {
      if (!chosen[i] && scores[i] > best_score) {
        best_score = scores[i];
        best = static_cast<int>(i);
      }
    }
    out.step_times_s.push_back(seconds_since(t0));
    if (best < 0) break;  // waypoint set exhausted

    const auto [delta, at] = insertion(waypoints[static_cast<std::size_t>(best)]);
    if (tour_cost + delta > path_budget + 1e-9) break;
    tour.insert(tour.begin() + static_cast<std::ptrdiff_t>(at), waypoints[static_cast<std::size_t>(best)]);
    tour_cost += delta;
    chosen[static_cast<std::size_t>(best)] = 1;
  }

  // Execute the tour, sampling at each waypoint on first visit.
  for (const GridCell& c : tour) {
    bool already = false;
    for (const GridCell& s : out.cells) {
      if (s == c) {
        already = true;
        break;
      }
    }
    if (already) continue;
    out.cells.push_back(c);
    out.spectra.append(sample_in_situ(scene.oracle, c, rng), Provenance::InSitu);
  }
  out.path_cost = tour_cost;
  return out;
}

PlannerOutcome fixed_step_plan(const SceneryPair& scene, GridCell start,
                               const SamplingBudget& budget, int stride, RandomStream& rng) {
  check_start(scene, start);
  check_budget(budget);
  if (stride < 1) throw ConfigInvalid("fixed: stride must be >= 1");

  PlannerOutcome out;
  out.cells.push_back(start);
  out.spectra.append(sample_in_situ(scene.oracle, start, rng), Provenance::InSitu);

  GridCell cell = start;
  int dir = 1;  // +1 east, -1 west
  int moves = 0;
  // One serpentine move: advance along the row, or drop to the next row and
  // reverse at the edge (wrapping to row 0 past the bottom).
  auto advance = [&]() {
    const int next_col = cell.col + dir;
    if (next_col >= 0 && next_col < scene.grid.cols) {
      cell.col = next_col;
    } else {
      cell.row = (cell.row + 1) % scene.grid.rows;
      dir = -dir;
    }
    ++moves;
  };

  while (may_move(budget, scene, static_cast<int>(out.cells.size()), moves)) {
    bool complete = true;
    for (int k = 0; k < stride; ++k) {
      if (!may_move(budget, scene, static_cast<int>(out.cells.size()), moves)) {
        complete = false;
        break;
      }
      advance();
    }
    if (!complete) break;  // budget ran out mid-stride
    out.cells.push_back(cell);
    out.spectra.append(sample_in_situ(scene.oracle, cell, rng), Provenance::InSitu);
  }
  out.path_cost = moves * scene.grid.step_cost;
  return out;
}

PlannerOutcome random_plan(const SceneryPair& scene, GridCell start, const SamplingBudget& budget,
                           RandomStream& rng) {
  check_start(scene, start);
  check_budget(budget);

  PlannerOutcome out;
  out.cells.push_back(start);
  out.spectra.append(sample_in_situ(scene.oracle, start, rng), Provenance::InSitu);

  GridCell cell = start;
  int moves = 0;
  while (may_move(budget, scene, static_cast<int>(out.cells.size()), moves)) {
    std::vector<int> actions;
    actions.reserve(kActionCount);
    for (int a = 0; a < kActionCount; ++a) {
      if (scene.grid.in_bounds(apply_action(cell, a))) actions.push_back(a);
    }
    const int a = actions[static_cast<std::size_t>(rng.next_int(static_cast<int>(actions.size())))];
    cell = apply_action(cell, a);
    ++moves;
    out.cells.push_back(cell);
    out.spectra.append(sample_in_situ(scene.oracle, cell, rng), Provenance::InSitu);
  }
  out.path_cost = moves * scene.grid.step_cost;
  return out;
}

}  // namespace sse
