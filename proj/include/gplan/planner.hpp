#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gplan/grid_map.hpp"
#include "gplan/guidance_map.hpp"
#include "gplan/nearest.hpp"
#include "gplan/rng.hpp"
#include "gplan/sampler.hpp"

namespace gplan {

enum class PlannerKind { Rrt, RrtStar };

inline const char* to_string(PlannerKind k) { return k == PlannerKind::Rrt ? "rrt" : "rrt_star"; }

inline PlannerKind parse_planner(const std::string& s) {
  if (s == "rrt") return PlannerKind::Rrt;
  if (s == "rrt_star" || s == "rrt*") return PlannerKind::RrtStar;
  throw std::invalid_argument("unknown planner '" + s + "' (expected rrt or rrt_star)");
}

struct PlannerConfig {
  double step_size = 2.0;
  double bias_factor = 0.9;
  int max_iterations = 10000;
  double goal_radius = 2.0;
  double rewire_radius_scale = 1.5;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be positive");
    if (!(bias_factor >= 0.0 && bias_factor <= 1.0)) {
      throw std::invalid_argument("bias_factor must lie in [0, 1]");
    }
    // A zero budget is accepted and simply performs no search.
    if (max_iterations < 0) throw std::invalid_argument("max_iterations must be non-negative");
    if (!(goal_radius > 0.0)) throw std::invalid_argument("goal_radius must be positive");
    if (!(rewire_radius_scale > 0.0)) {
      throw std::invalid_argument("rewire_radius_scale must be positive");
    }
  }
};

inline State hybrid_sample(const GridMap& map, const GuidanceMap* guidance,
                           const PlannerConfig& config, Rng& rng) {
  return hybrid_sample(map, guidance, config.bias_factor, rng);
}

struct SearchTree {
  static constexpr int kNoParent = -1;

  std::vector<State> nodes;
  std::vector<int> parent;
  std::vector<double> cost_to_come;

  std::size_t size() const { return nodes.size(); }

  /// Root-to-node states.
  std::vector<State> branch(int node) const {
    std::vector<State> out;
    for (int n = node; n != kNoParent; n = parent[static_cast<std::size_t>(n)]) {
      out.push_back(nodes[static_cast<std::size_t>(n)]);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }
};

struct TrialRecord {
  bool found = false;
  std::vector<State> path;
  double path_length = 0.0;
  // RRT: draws until the first goal connection (or the whole budget).
  // RRT*: draws until the first goal connection, though the search keeps
  // running for the full budget afterwards.
  std::uint64_t sampled_nodes = 0;
  std::uint64_t tree_size = 0;
  std::uint64_t iterations_used = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// Everything a run produces; TrialRecord is the summary.
struct PlanOutcome {
  TrialRecord record;
  SearchTree tree;
  /// Best goal cost after every `history_interval` iterations (infinity while
  /// no solution exists). Only filled for RRT*.
  std::vector<double> best_cost_history;
};

/// Sum of consecutive Euclidean distances. Throws on an empty path.
inline double path_cost(std::span<const State> path) {
  if (path.empty()) throw std::invalid_argument("path_cost of an empty path");
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) total += distance(path[i - 1], path[i]);
  return total;
}

/// Shrinking-ball neighbourhood radius for a tree of n nodes.
inline double rewire_radius(const PlannerConfig& cfg, std::size_t n, int width, int height) {
  const double nn = static_cast<double>(n) + 1.0;
  const double ball = cfg.rewire_radius_scale * std::sqrt(std::log(nn) / nn) *
                      std::sqrt(static_cast<double>(width) * height);
  return std::min(ball, 4.0 * cfg.step_size);
}

class PlanningError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline State steer(const State& from, const State& toward, double step) {
  const double d = distance(from, toward);
  if (d <= step) return toward;
  const double s = step / d;
  return {from.x + (toward.x - from.x) * s, from.y + (toward.y - from.y) * s};
}

inline void check_inputs(const GridMap& map, const PlanningTask& task,
                         const GuidanceMap* guidance, const PlannerConfig& cfg) {
  cfg.validate();
  validate_task(map, task);
  if (map.in_collision(task.start)) throw PlanningError("start state is in collision");
  if (map.in_collision(task.goal)) throw PlanningError("goal state is in collision");
  if (guidance && !guidance->matches(map)) {
    throw std::invalid_argument("guidance dimensions do not match the map");
  }
}

/// Tree plus the bookkeeping RRT* needs for rewiring.
class GrowingTree {
 public:
  GrowingTree(const GridMap& map, const State& root) : index_(map.width(), map.height()) {
    add(root, SearchTree::kNoParent, 0.0);
  }

  int add(const State& s, int parent, double cost) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back(s);
    tree_.parent.push_back(parent);
    tree_.cost_to_come.push_back(cost);
    children_.emplace_back();
    if (parent != SearchTree::kNoParent) children_[static_cast<std::size_t>(parent)].push_back(id);
    index_.insert(s);
    return id;
  }

  /// Moves `node` under `new_parent` and recomputes costs of its subtree.
  void reparent(int node, int new_parent) {
    const auto n = static_cast<std::size_t>(node);
    auto& old_kids = children_[static_cast<std::size_t>(tree_.parent[n])];
    old_kids.erase(std::find(old_kids.begin(), old_kids.end(), node));
    tree_.parent[n] = new_parent;
    children_[static_cast<std::size_t>(new_parent)].push_back(node);
    std::deque<int> open{node};
    while (!open.empty()) {
      const auto c = static_cast<std::size_t>(open.front());
      open.pop_front();
      const auto p = static_cast<std::size_t>(tree_.parent[c]);
      tree_.cost_to_come[c] = tree_.cost_to_come[p] + distance(tree_.nodes[p], tree_.nodes[c]);
      for (int k : children_[c]) open.push_back(k);
    }
  }

  const State& node(int i) const { return tree_.nodes[static_cast<std::size_t>(i)]; }
  double cost(int i) const { return tree_.cost_to_come[static_cast<std::size_t>(i)]; }
  std::size_t size() const { return tree_.nodes.size(); }
  int nearest(const State& q) const { return index_.nearest(q); }
  std::vector<int> near(const State& q, double r) const { return index_.near(q, r); }
  const SearchTree& tree() const { return tree_; }
  SearchTree release() { return std::move(tree_); }

 private:
  SearchTree tree_;
  std::vector<std::vector<int>> children_;
  BucketIndex index_;
};

inline bool reaches_goal(const GridMap& map, const PlanningTask& task, const State& s) {
  return distance(s, task.goal) <= task.goal_radius && segment_free(map, s, task.goal);
}

inline std::vector<State> goal_path(const SearchTree& tree, int node, const State& goal) {
  std::vector<State> path = tree.branch(node);
  if (!(path.back() == goal)) path.push_back(goal);
  return path;
}

}  // namespace detail

/// RRT. Stops at the first node that lies within the goal radius and sees the
/// goal through free space; the returned path is that node's branch with the
/// goal appended.
inline PlanOutcome run_rrt(const GridMap& map, const PlanningTask& task,
                           const GuidanceMap* guidance, const PlannerConfig& cfg) {
  detail::check_inputs(map, task, guidance, cfg);
  const HybridSampler sampler(map, guidance, cfg.bias_factor);
  Rng rng(cfg.rng_seed);
  detail::GrowingTree tree(map, task.start);

  PlanOutcome out;
  TrialRecord& rec = out.record;
  rec.seed = cfg.rng_seed;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const State sample = sampler(rng);
    ++rec.sampled_nodes;
    rec.iterations_used = static_cast<std::uint64_t>(it) + 1;
    const int near = tree.nearest(sample);
    const State next = detail::steer(tree.node(near), sample, cfg.step_size);
    if (next == tree.node(near) || !segment_free(map, tree.node(near), next)) continue;
    const int id = tree.add(next, near, tree.cost(near) + distance(tree.node(near), next));
    if (detail::reaches_goal(map, task, next)) {
      rec.found = true;
      rec.path = detail::goal_path(tree.tree(), id, task.goal);
      rec.path_length = path_cost(rec.path);
      break;
    }
  }
  rec.tree_size = tree.size();
  out.tree = tree.release();
  return out;
}

/// RRT* with choose-parent and rewiring over a shrinking ball. Always spends
/// the full iteration budget and returns the cheapest goal-reaching branch.
inline PlanOutcome run_rrt_star(const GridMap& map, const PlanningTask& task,
                                const GuidanceMap* guidance, const PlannerConfig& cfg,
                                int history_interval = 100) {
  detail::check_inputs(map, task, guidance, cfg);
  const HybridSampler sampler(map, guidance, cfg.bias_factor);
  Rng rng(cfg.rng_seed);
  detail::GrowingTree tree(map, task.start);
  constexpr double inf = std::numeric_limits<double>::infinity();

  PlanOutcome out;
  TrialRecord& rec = out.record;
  rec.seed = cfg.rng_seed;
  std::vector<int> goal_nodes;
  int best_goal = -1;
  double best_cost = inf;

  for (int it = 0; it < cfg.max_iterations; ++it) {
    const State sample = sampler(rng);
    if (best_goal < 0) ++rec.sampled_nodes;
    rec.iterations_used = static_cast<std::uint64_t>(it) + 1;

    const int nearest = tree.nearest(sample);
    const State next = detail::steer(tree.node(nearest), sample, cfg.step_size);
    if (!(next == tree.node(nearest)) && segment_free(map, tree.node(nearest), next)) {
      const double radius = rewire_radius(cfg, tree.size(), map.width(), map.height());
      const std::vector<int> near = tree.near(next, radius);

      int parent = nearest;
      double parent_cost = tree.cost(nearest) + distance(tree.node(nearest), next);
      for (int j : near) {
        if (j == nearest) continue;
        const double c = tree.cost(j) + distance(tree.node(j), next);
        if (c < parent_cost && segment_free(map, tree.node(j), next)) {
          parent = j;
          parent_cost = c;
        }
      }
      const int id = tree.add(next, parent, parent_cost);

      for (int j : near) {
        if (j == parent) continue;
        const double c = tree.cost(id) + distance(next, tree.node(j));
        if (c < tree.cost(j) && segment_free(map, next, tree.node(j))) tree.reparent(j, id);
      }

      if (detail::reaches_goal(map, task, next)) goal_nodes.push_back(id);
    }

    // Rewiring can lower the cost of any goal node, so rescan.
    for (int g : goal_nodes) {
      const double c = tree.cost(g) + distance(tree.node(g), task.goal);
      if (c < best_cost || (c == best_cost && g < best_goal)) {
        best_cost = c;
        best_goal = g;
      }
    }
    if (history_interval > 0 && (it + 1) % history_interval == 0) {
      out.best_cost_history.push_back(best_cost);
    }
  }

  if (best_goal >= 0) {
    rec.found = true;
    rec.path = detail::goal_path(tree.tree(), best_goal, task.goal);
    rec.path_length = path_cost(rec.path);
  }
  rec.tree_size = tree.size();
  out.tree = tree.release();
  return out;
}

inline TrialRecord plan_rrt(const GridMap& map, const PlanningTask& task,
                            const GuidanceMap* guidance, const PlannerConfig& cfg) {
  return run_rrt(map, task, guidance, cfg).record;
}

inline TrialRecord plan_rrt_star(const GridMap& map, const PlanningTask& task,
                                 const GuidanceMap* guidance, const PlannerConfig& cfg) {
  return run_rrt_star(map, task, guidance, cfg).record;
}

inline PlanOutcome run_planner(PlannerKind kind, const GridMap& map, const PlanningTask& task,
                               const GuidanceMap* guidance, const PlannerConfig& cfg) {
  return kind == PlannerKind::Rrt ? run_rrt(map, task, guidance, cfg)
                                  : run_rrt_star(map, task, guidance, cfg);
}

/// Describes the first violated tree invariant, or nullopt if the tree is a
/// well-formed search tree: rooted at node 0, acyclic, cost-consistent to
/// `rel_tol`, and with every edge collision-free.
inline std::optional<std::string> check_tree(const GridMap& map, const SearchTree& tree,
                                             double rel_tol = 1e-9) {
  const std::size_t n = tree.nodes.size();
  if (n == 0) return "empty tree";
  if (tree.parent.size() != n || tree.cost_to_come.size() != n) return "ragged tree arrays";
  if (tree.parent[0] != SearchTree::kNoParent) return "node 0 is not the root";
  if (tree.cost_to_come[0] != 0.0) return "root cost is not zero";
  // 0 = unvisited, 1 = on current walk, 2 = known to reach the root.
  std::vector<std::uint8_t> mark(n, 0);
  mark[0] = 2;
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<std::size_t> walk;
    std::size_t cur = i;
    while (mark[cur] == 0) {
      mark[cur] = 1;
      walk.push_back(cur);
      const int p = tree.parent[cur];
      if (p < 0 || static_cast<std::size_t>(p) >= n) {
        return "node " + std::to_string(cur) + " has an invalid parent";
      }
      cur = static_cast<std::size_t>(p);
    }
    if (mark[cur] == 1) return "cycle through node " + std::to_string(cur);
    for (std::size_t w : walk) mark[w] = 2;
  }
  for (std::size_t i = 1; i < n; ++i) {
    const auto p = static_cast<std::size_t>(tree.parent[i]);
    const double expect = tree.cost_to_come[p] + distance(tree.nodes[p], tree.nodes[i]);
    const double got = tree.cost_to_come[i];
    if (std::abs(got - expect) > rel_tol * std::abs(expect)) {
      return "cost mismatch at node " + std::to_string(i);
    }
    if (!segment_free(map, tree.nodes[p], tree.nodes[i])) {
      return "edge into node " + std::to_string(i) + " is in collision";
    }
  }
  return std::nullopt;
}

}  // namespace gplan
