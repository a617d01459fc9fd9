#include "sse/mdp.hpp"

namespace sse {

const char* action_name(int action) {
  static constexpr std::array<const char*, 8> names = {"n", "ne", "e", "se", "s", "sw", "w", "nw"};
  return (action >= 0 && action < kActionCount) ? names[static_cast<std::size_t>(action)] : "?";
}

int action_between(GridCell from, GridCell to) {
  for (int a = 0; a < kActionCount; ++a) {
    if (apply_action(from, a) == to) return a;
  }
  return -1;
}

RewardParams resolve_reward_params(const RewardParams& params, const SceneryPair& scene) {
  if (!(params.kernel_sigma_f > 0.0)) throw ConfigInvalid("reward: kernel_sigma_f must be > 0");
  if (!(params.kernel_noise > 0.0)) throw ConfigInvalid("reward: kernel_noise must be > 0");
  if (params.tau < 0.0) throw ConfigInvalid("reward: tau must be >= 0");
  RewardParams out = params;
  if (!(out.kernel_lengthscale > 0.0)) {
    out.kernel_lengthscale = median_pairwise_distance(scene.orbital);
  }
  return out;
}

int revisit_count(const std::vector<GridCell>& visited, const std::vector<GridCell>& planned) {
  int revisits = 0;
  std::vector<GridCell> seen;
  seen.reserve(visited.size() + planned.size());
  auto count = [&](GridCell c) {
    for (const GridCell& s : seen) {
      if (s == c) {
        ++revisits;
        return;
      }
    }
    seen.push_back(c);
  };
  for (GridCell c : visited) count(c);
  for (GridCell c : planned) count(c);
  return revisits;
}

double reward(const ExplorationState& state, const RewardParams& params) {
  const Eigen::Index n_in = state.in_situ().size();
  const Eigen::Index n_planned = state.planned_remote.cols();
  if (n_in + n_planned == 0) throw EmptyHistory("reward: no spectra held");

  Eigen::MatrixXd all(state.in_situ().bands(), n_in + n_planned);
  all.leftCols(n_in) = state.in_situ().matrix();
  if (n_planned > 0) all.rightCols(n_planned) = state.planned_remote;

  const double h = gaussian_entropy(
      kernel_gram(all, params.kernel_sigma_f, params.kernel_lengthscale, params.kernel_noise));
  return h - params.tau * revisit_count(state.visited(), state.planned_cells);
}

ExplorationMdp::ExplorationMdp(const SceneryPair& scene, const RewardParams& params,
                               bool rollout_avoid_backtrack)
    : scene_(&scene),
      params_(resolve_reward_params(params, scene)),
      avoid_backtrack_(rollout_avoid_backtrack) {}

ExplorationState ExplorationMdp::make_root(const std::vector<GridCell>& visited,
                                           const SpectralLibrary& in_situ) const {
  if (visited.empty() || in_situ.empty()) throw EmptyHistory("make_root: no traverse history");
  if (static_cast<Eigen::Index>(visited.size()) != in_situ.size()) {
    throw DimensionMismatch("make_root: " + std::to_string(visited.size()) + " cells, " +
                            std::to_string(in_situ.size()) + " spectra");
  }
  for (GridCell c : visited) {
    if (!scene_->grid.in_bounds(c)) {
      throw OutOfBounds("make_root: visited cell (" + std::to_string(c.row) + ", " +
                        std::to_string(c.col) + ") outside grid");
    }
  }
  auto root = std::make_shared<MdpRoot>();
  root->scene = scene_;
  root->in_situ = in_situ;
  root->visited = visited;
  root->params = params_;
  root->base = std::make_shared<EntropyExtender>(in_situ.matrix(), params_.kernel_sigma_f,
                                                 params_.kernel_lengthscale, params_.kernel_noise);
  ExplorationState s;
  s.root = std::move(root);
  s.planned_remote.resize(in_situ.bands(), 0);
  return s;
}

std::vector<int> ExplorationMdp::valid_actions(const State& s) const {
  std::vector<int> actions;
  actions.reserve(kActionCount);
  const GridCell here = s.rover_cell();
  for (int a = 0; a < kActionCount; ++a) {
    if (scene_->grid.in_bounds(apply_action(here, a))) actions.push_back(a);
  }
  return actions;
}

std::pair<ExplorationState, double> ExplorationMdp::step(const State& s, int action) const {
  const GridCell target = apply_action(s.rover_cell(), action);
  if (action < 0 || action >= kActionCount || !scene_->grid.in_bounds(target)) {
    throw InvalidAction("step: action " + std::to_string(action) + " leaves the grid");
  }
  State next;
  next.root = s.root;
  next.planned_cells = s.planned_cells;
  next.planned_cells.push_back(target);
  next.planned_remote.resize(s.planned_remote.rows(), s.planned_remote.cols() + 1);
  next.planned_remote.leftCols(s.planned_remote.cols()) = s.planned_remote;
  next.planned_remote.col(next.planned_remote.cols() - 1) = scene_->orbital_spectrum(target);
  const double r = reward(next);
  return {std::move(next), r};
}

double ExplorationMdp::reward(const State& s) const {
  const double h = s.root->base->entropy_with(s.planned_remote);
  return h - params_.tau * revisit_count(s.visited(), s.planned_cells);
}

std::vector<int> ExplorationMdp::rollout_actions(const State& s, int prev_action) const {
  std::vector<int> actions = valid_actions(s);
  if (avoid_backtrack_ && prev_action >= 0 && actions.size() >= 2) {
    const int rev = reverse_action(prev_action);
    std::erase(actions, rev);
  }
  return actions;
}

}  // namespace sse
