#pragma once

#include <vector>

#include "sse/mcts.hpp"
#include "sse/mdp.hpp"

namespace sse {

struct SamplingBudget {
  enum class Mode { Samples, PathCost };
  Mode mode = Mode::Samples;
  double value = 25.0;  // sample count, or total path-cost cap

  static SamplingBudget samples(int n) { return {Mode::Samples, static_cast<double>(n)}; }
  static SamplingBudget path_cost(double cap) { return {Mode::PathCost, cap}; }
};

struct PlannerOutcome {
  std::vector<GridCell> cells;       // sampled cells in order, start first
  SpectralLibrary spectra;           // in-situ samples, one per cell
  std::vector<double> step_times_s;  // wall time per planning decision
  double path_cost = 0.0;            // step_cost x moves taken

  GridCell end_cell() const { return cells.back(); }
  double mean_step_time_s() const;
};

/// Receding-horizon planner: per step, builds a fresh search tree over the
/// current MDP, executes the best action, samples in situ at the new cell
/// and restarts with the grown library. Trees are never reused. The start
/// cell's sample counts toward a sample budget.
PlannerOutcome nmpse_run(const SceneryPair& scene, GridCell start, const SamplingBudget& budget,
                         const RewardParams& reward_params, const MctsParams& mcts_params,
                         RandomStream& rng);

/// Greedy entropy-based waypoint selection under a travel budget. Starting
/// from {start, goal}, repeatedly adds the waypoint maximising the joint
/// entropy of the remote spectra at the chosen cells; stops when inserting
/// the best candidate would push the tour cost past the budget. The tour is
/// maintained by cheapest insertion with Chebyshev move distances. Does not
/// replan while executing.
PlannerOutcome gss_plan(const SceneryPair& scene, GridCell start, GridCell goal,
                        double path_budget, const std::vector<GridCell>& waypoints,
                        const RewardParams& reward_params, RandomStream& rng);

/// Marches in a fixed direction, sampling every `stride` cells, serpentine
/// wrap at the grid edges (next row, direction reversed; past the last row
/// it wraps back to row 0).
PlannerOutcome fixed_step_plan(const SceneryPair& scene, GridCell start,
                               const SamplingBudget& budget, int stride, RandomStream& rng);

/// Uniform random walk over valid neighbours, sampling at every cell.
PlannerOutcome random_plan(const SceneryPair& scene, GridCell start, const SamplingBudget& budget,
                           RandomStream& rng);

}  // namespace sse
