#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "sse/errors.hpp"
#include "sse/rng.hpp"

namespace sse {

struct MctsParams {
  int iterations = 500;
  int max_depth = 5;
  double gamma = 0.9;   // discount
  double kappa = 1.0;   // UCB exploration weight
  double epsilon = 0.0; // horizon cutoff; <= 0 resolves to gamma^(max_depth + 0.5)
  bool rollout_avoid_backtrack = true;  // consumed by the MDP's rollout_actions

  /// Hook for tests: observes every (node, action, return) backup.
  std::function<void(const void* node, int action, double g)> on_backup;
};

inline double resolved_epsilon(const MctsParams& p) {
  return p.epsilon > 0.0 ? p.epsilon : std::pow(p.gamma, p.max_depth + 0.5);
}

inline void validate_mcts_params(const MctsParams& p) {
  if (p.iterations < 1) throw ConfigInvalid("mcts: iterations must be >= 1");
  if (p.max_depth < 1) throw ConfigInvalid("mcts: max_depth must be >= 1");
  if (!(p.gamma > 0.0 && p.gamma < 1.0)) throw ConfigInvalid("mcts: gamma must be in (0, 1)");
  if (p.kappa < 0.0) throw ConfigInvalid("mcts: kappa must be >= 0");
}

/// One tree node. Edges are kept sorted by action index; `untried` holds
/// actions not yet expanded into children.
template <class Mdp>
struct SearchNode {
  using State = typename Mdp::State;

  struct Edge {
    int action = 0;
    double q = 0.0;        // running mean of backed-up returns
    int n = 0;             // N(s, a)
    double reward = 0.0;   // r' of the (deterministic) step, cached at expansion
    std::unique_ptr<SearchNode> child;
  };

  State state;
  int visit_count = 0;  // N(s)
  std::vector<int> untried;
  std::vector<Edge> edges;

  explicit SearchNode(State s, const Mdp& mdp) : state(std::move(s)) {
    untried = mdp.valid_actions(state);
  }
};

/// Random-policy value estimate: discounted rewards along uniformly random
/// valid actions until the horizon cutoff. Touches no tree statistics.
template <class Mdp>
double rollout(const Mdp& mdp, const typename Mdp::State& state, int depth, const MctsParams& p,
               RandomStream& rng, int prev_action = -1) {
  if (std::pow(p.gamma, depth) < resolved_epsilon(p)) return 0.0;
  std::vector<int> actions = mdp.rollout_actions(state, prev_action);
  if (actions.empty()) return 0.0;
  const int a = actions[static_cast<std::size_t>(rng.next_int(static_cast<int>(actions.size())))];
  auto [next, r] = mdp.step(state, a);
  return r + p.gamma * rollout(mdp, next, depth + 1, p, rng, a);
}

/// One simulation pass. Untried actions are expanded first (the new edge's
/// statistics start on its next visit); expanded-but-unvisited edges are
/// selected before any UCB scoring, so the UCB formula only ever sees
/// N(s,a) >= 1. Returns the discounted return G backed up along the path.
template <class Mdp>
double simulate(SearchNode<Mdp>& node, const Mdp& mdp, const MctsParams& p, RandomStream& rng,
                int depth) {
  if (std::pow(p.gamma, depth) < resolved_epsilon(p)) return 0.0;

  if (!node.untried.empty()) {
    const std::size_t pick = static_cast<std::size_t>(rng.next_int(static_cast<int>(node.untried.size())));
    const int action = node.untried[pick];
    node.untried.erase(node.untried.begin() + static_cast<std::ptrdiff_t>(pick));

    auto [next, r] = mdp.step(node.state, action);
    typename SearchNode<Mdp>::Edge edge;
    edge.action = action;
    edge.reward = r;
    edge.child = std::make_unique<SearchNode<Mdp>>(std::move(next), mdp);
    const double g = r + p.gamma * rollout(mdp, edge.child->state, depth + 1, p, rng, action);
    auto at = std::lower_bound(node.edges.begin(), node.edges.end(), action,
                               [](const auto& e, int a) { return e.action < a; });
    node.edges.insert(at, std::move(edge));
    return g;
  }

  if (node.edges.empty()) return 0.0;  // terminal: no valid actions

  // Select: first unvisited edge in action order, else UCB argmax.
  std::size_t pick = node.edges.size();
  for (std::size_t i = 0; i < node.edges.size(); ++i) {
    if (node.edges[i].n == 0) {
      pick = i;
      break;
    }
  }
  if (pick == node.edges.size()) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < node.edges.size(); ++i) {
      const auto& e = node.edges[i];
      const double ucb = e.q + p.kappa * std::sqrt(std::log(static_cast<double>(node.visit_count)) /
                                                   static_cast<double>(e.n));
      if (ucb > best) {
        best = ucb;
        pick = i;
      }
    }
  }

  auto& edge = node.edges[pick];
  const double g = edge.reward + p.gamma * simulate(*edge.child, mdp, p, rng, depth + 1);
  node.visit_count += 1;
  edge.n += 1;
  edge.q += (g - edge.q) / static_cast<double>(edge.n);
  if (p.on_backup) p.on_backup(&node, edge.action, g);
  return g;
}

template <class Mdp>
struct SearchResult {
  int action = -1;
  std::unique_ptr<SearchNode<Mdp>> root;
};

/// Full search: `iterations` simulations from the root, then the root action
/// with the highest Q (actions never visited score 0; ties go to the lowest
/// action index).
template <class Mdp>
SearchResult<Mdp> mcts_search_tree(const typename Mdp::State& root_state, const Mdp& mdp,
                                   const MctsParams& p, RandomStream& rng) {
  validate_mcts_params(p);
  auto root = std::make_unique<SearchNode<Mdp>>(root_state, mdp);
  const std::vector<int> actions = mdp.valid_actions(root_state);
  if (actions.empty()) throw NoValidActions("mcts: root has no valid actions");

  for (int i = 0; i < p.iterations; ++i) simulate(*root, mdp, p, rng, 0);

  int best_action = -1;
  double best_q = -std::numeric_limits<double>::infinity();
  for (int a : actions) {
    double q = 0.0;
    for (const auto& e : root->edges) {
      if (e.action == a) {
        q = e.n > 0 ? e.q : 0.0;
        break;
      }
    }
    if (q > best_q) {
      best_q = q;
      best_action = a;
    }
  }
  return {best_action, std::move(root)};
}

template <class Mdp>
int mcts_search(const typename Mdp::State& root_state, const Mdp& mdp, const MctsParams& p,
                RandomStream& rng) {
  return mcts_search_tree(root_state, mdp, p, rng).action;
}

}  // namespace sse
