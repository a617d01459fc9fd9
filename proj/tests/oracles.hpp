// Test-side oracles, independent of the library implementations they check.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

namespace oracles {

/// Minimum of ||A a - b||_2 over the grid a in [lo, hi]^K refined down to
/// `final_step`. Successive refinement shrinks the window around the current
/// best by a generous margin each stage; the objective is convex, so the
/// value found matches a one-shot exhaustive grid at the same final step
/// (validated against exhaustive_grid_nnls for small K).
double grid_nnls_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double lo, double hi,
                          double final_step);

/// One-shot exhaustive grid search; only feasible for K <= 2 at fine steps.
double exhaustive_grid_nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double lo,
                            double hi, double step);

/// Gaussian differential entropy from the plain determinant (no Cholesky).
double entropy_from_determinant(const Eigen::MatrixXd& sigma);

/// Exhaustive expectimax over a deterministic MDP with the same horizon rule
/// the tree search uses (cut when gamma^depth < epsilon). Returns the best
/// first action (ties to the lowest index) and its value.
template <class Mdp>
std::pair<int, double> expectimax(const Mdp& mdp, const typename Mdp::State& state, double gamma,
                                  double epsilon, int depth = 0) {
  if (std::pow(gamma, depth) < epsilon) return {-1, 0.0};
  int best_action = -1;
  double best = -std::numeric_limits<double>::infinity();
  for (int a : mdp.valid_actions(state)) {
    auto [next, r] = mdp.step(state, a);
    const double v = r + gamma * expectimax(mdp, next, gamma, epsilon, depth + 1).second;
    if (v > best) {
      best = v;
      best_action = a;
    }
  }
  if (best_action < 0) return {-1, 0.0};
  return {best_action, best};
}

/// Deterministic toy MDP over an implicit infinite tree; rewards are a pure
/// hash of (seed, state id) in [0, 1).
struct ToyMdp {
  struct State {
    std::uint64_t id = 0;
  };

  int action_count = 3;
  std::uint64_t seed = 0;

  std::vector<int> valid_actions(const State&) const {
    std::vector<int> a(static_cast<std::size_t>(action_count));
    for (int i = 0; i < action_count; ++i) a[static_cast<std::size_t>(i)] = i;
    return a;
  }

  std::pair<State, double> step(const State& s, int action) const {
    State next{s.id * static_cast<std::uint64_t>(action_count) + static_cast<std::uint64_t>(action) + 1};
    std::uint64_t z = seed ^ (next.id * 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return {next, static_cast<double>(z >> 11) * 0x1.0p-53};
  }

  std::vector<int> rollout_actions(const State& s, int) const { return valid_actions(s); }
};

/// Single-action chain with scripted rewards (zero past the end).
struct CorridorMdp {
  struct State {
    int pos = 0;
  };

  std::vector<double> rewards;

  std::vector<int> valid_actions(const State&) const { return {0}; }

  std::pair<State, double> step(const State& s, int) const {
    const double r = s.pos < static_cast<int>(rewards.size())
                         ? rewards[static_cast<std::size_t>(s.pos)]
                         : 0.0;
    return {State{s.pos + 1}, r};
  }

  std::vector<int> rollout_actions(const State& s, int) const { return valid_actions(s); }
};

}  // namespace oracles
