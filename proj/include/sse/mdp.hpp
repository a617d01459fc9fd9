#pragma once

#include <array>
#include <memory>
#include <utility>
#include <vector>

#include "sse/entropy.hpp"
#include "sse/scene.hpp"

namespace sse {

/// The eight compass moves, in fixed index order (ties everywhere are broken
/// by this order).
enum class ExplorationAction : int { N = 0, NE, E, SE, S, SW, W, NW };

inline constexpr int kActionCount = 8;

inline constexpr std::array<std::pair<int, int>, 8> kActionDeltas = {{
    {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1},
}};

inline GridCell apply_action(GridCell c, int action) {
  return {c.row + kActionDeltas[static_cast<std::size_t>(action)].first,
          c.col + kActionDeltas[static_cast<std::size_t>(action)].second};
}

/// Index of the move that undoes `action`.
inline int reverse_action(int action) { return (action + 4) % 8; }

const char* action_name(int action);
int action_between(GridCell from, GridCell to);  // -1 when not one move apart

struct RewardParams {
  double kernel_sigma_f = 1.0;
  double kernel_lengthscale = 0.0;  // <= 0: median pairwise distance of the orbital image
  double kernel_noise = 0.1;
  double tau = 1.0;                 // revisit penalty weight
};

/// Fills in the lengthscale from the scene when left at the median default.
RewardParams resolve_reward_params(const RewardParams& params, const SceneryPair& scene);

/// Immutable data shared by every state of one planning MDP: the scene, the
/// in-situ history (Y, V) that is fixed while a tree is built, and the
/// cached factor of the in-situ kernel block.
struct MdpRoot {
  const SceneryPair* scene = nullptr;
  SpectralLibrary in_situ;             // Y
  std::vector<GridCell> visited;       // V
  RewardParams params;                 // resolved
  std::shared_ptr<const EntropyExtender> base;
};

/// The state tuple (Y, V, X_D, D, X). Y/V/X live in the shared root; each
/// state owns only its planned tail.
struct ExplorationState {
  std::shared_ptr<const MdpRoot> root;
  std::vector<GridCell> planned_cells;  // D
  Eigen::MatrixXd planned_remote;       // bands x |D| (X_D)

  const SpectralLibrary& in_situ() const { return root->in_situ; }
  const std::vector<GridCell>& visited() const { return root->visited; }
  const SceneryPair& scene() const { return *root->scene; }
  GridCell rover_cell() const {
    return planned_cells.empty() ? root->visited.back() : planned_cells.back();
  }
};

/// Number of entries in the location sequence V then D that repeat an
/// earlier entry (the revisit count U).
int revisit_count(const std::vector<GridCell>& visited, const std::vector<GridCell>& planned);

/// From-scratch reward of Eq.-style form h([Y, X_D]) - tau * U: differential
/// entropy of the kernel Gram over all held spectra minus the revisit
/// penalty. This is the contract any cached evaluation must match.
double reward(const ExplorationState& state, const RewardParams& params);

/// Deterministic exploration MDP over a scene. States are immutable values;
/// all methods are const and safe to call from parallel planner runs.
class ExplorationMdp {
 public:
  using State = ExplorationState;

  ExplorationMdp(const SceneryPair& scene, const RewardParams& params,
                 bool rollout_avoid_backtrack = true);

  /// Root state for the MDP at the current traverse position.
  State make_root(const std::vector<GridCell>& visited, const SpectralLibrary& in_situ) const;

  /// Moves whose target cell is inside the grid, ascending action index.
  std::vector<int> valid_actions(const State& s) const;

  /// Appends the target cell and its orbital spectrum to (D, X_D) and
  /// evaluates the successor's reward.
  std::pair<State, double> step(const State& s, int action) const;

  /// Cached-factor reward; equals sse::reward(s, params()) within 1e-8.
  double reward(const State& s) const;

  /// Action set for rollouts: valid actions, minus the reverse of the
  /// previous move when enabled and at least two alternatives remain.
  std::vector<int> rollout_actions(const State& s, int prev_action) const;

  const RewardParams& params() const { return params_; }
  const SceneryPair& scene() const { return *scene_; }

 private:
  const SceneryPair* scene_;
  RewardParams params_;
  bool avoid_backtrack_;
};

}  // namespace sse
