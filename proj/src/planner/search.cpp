// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/planner/search.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <tuple>
#include <unordered_map>

namespace mmrec::planner {

using pddl::AtomId;
using pddl::GroundedTask;
using pddl::WorldState;

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

// Delete-relaxed cost of reaching each goal atom; `additive` chooses sum vs max
// aggregation over preconditions and over the goal.
int relaxed_cost(const GroundedTask& task, const WorldState& state, bool additive) {
  std::vector<int> cost(task.atoms.size(), kInf);
  for (AtomId a = 0; a < task.atoms.size(); ++a) {
    if (state.contains(a)) cost[a] = 0;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& act : task.actions) {
      int c = 0;
      for (AtomId p : act.pre) {
        if (cost[p] >= kInf) {
          c = kInf;
          break;
        }
        c = additive ? c + cost[p] : std::max(c, cost[p]);
      }
      if (c >= kInf) continue;
      const int through = c + act.cost;
      for (AtomId q : act.add) {
        if (through < cost[q]) {
          cost[q] = through;
          changed = true;
        }
      }
    }
  }
  int h = 0;
  for (AtomId g : task.goal) {
    if (cost[g] >= kInf) return -1;
    h = additive ? h + cost[g] : std::max(h, cost[g]);
  }
  return h;
}

struct Node {
  WorldState state;
  std::int64_t parent;
  std::size_t action;
  int g;
};

Plan extract(const GroundedTask& task, const std::vector<Node>& nodes, std::int64_t goal) {
  Plan plan;
  for (std::int64_t n = goal; nodes[static_cast<std::size_t>(n)].parent >= 0; n = nodes[static_cast<std::size_t>(n)].parent) {
    plan.steps.push_back(task.actions[nodes[static_cast<std::size_t>(n)].action]);
  }
  std::reverse(plan.steps.begin(), plan.steps.end());
  for (const auto& s : plan.steps) plan.cost += s.cost;
  return plan;
}

}  // namespace

int h_add(const GroundedTask& task, const WorldState& state) { return relaxed_cost(task, state, true); }
int h_max(const GroundedTask& task, const WorldState& state) { return relaxed_cost(task, state, false); }

std::optional<Plan> find_plan(const GroundedTask& task, const WorldState& start, const SearchLimits& limits,
                              SearchStats* stats) {
  SearchStats local;
  SearchStats& st = stats ? *stats : local;
  if (task.goal_satisfied(start)) return Plan{};
  const int h0 = h_add(task, start);
  if (h0 < 0) return std::nullopt;

  // (f, h, sequence, node)
  using Entry = std::tuple<int, int, std::size_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::vector<Node> nodes;
  std::vector<int> node_hmax;
  std::unordered_map<WorldState, int, pddl::WorldStateHash> best_g;
  std::size_t sequence = 0;

  nodes.push_back({start, -1, 0, 0});
  node_hmax.push_back(h_max(task, start));
  best_g.emplace(start, 0);
  open.emplace(h0, h0, sequence++, 0);

  std::int64_t incumbent = -1;
  int incumbent_cost = kInf;

  while (!open.empty()) {
    auto [f, h, seq, id] = open.top();
    open.pop();
    (void)f;
    (void)h;
    (void)seq;
    const Node node = nodes[id];
    if (best_g[node.state] < node.g) continue;  // stale entry
    if (node.g + node_hmax[id] >= incumbent_cost) continue;
    if (task.goal_satisfied(node.state)) {
      incumbent = static_cast<std::int64_t>(id);
      incumbent_cost = node.g;
      continue;
    }
    if (++st.expanded > limits.max_nodes) {
      if (incumbent >= 0) break;
      throw ResourceLimitError("find_plan: node limit of " + std::to_string(limits.max_nodes) + " reached");
    }
    for (std::size_t ai = 0; ai < task.actions.size(); ++ai) {
      const auto& act = task.actions[ai];
      if (!pddl::applicable(node.state, act)) continue;
      WorldState next = pddl::apply_action(node.state, act);
      const int g = node.g + act.cost;
      auto it = best_g.find(next);
      if (it != best_g.end() && it->second <= g) continue;
      const int hn = h_add(task, next);
      if (hn < 0) continue;
      const int hm = h_max(task, next);
      if (g + hm >= incumbent_cost) continue;
      ++st.generated;
      best_g[next] = g;
      nodes.push_back({std::move(next), static_cast<std::int64_t>(id), ai, g});
      node_hmax.push_back(hm);
      open.emplace(g + hn, hn, sequence++, nodes.size() - 1);
    }
  }
  if (incumbent < 0) return std::nullopt;
  return extract(task, nodes, incumbent);
}

std::optional<Plan> optimal_plan_bfs(const GroundedTask& task, const WorldState& start, std::size_t max_states) {
  if (task.goal_satisfied(start)) return Plan{};
  using Entry = std::tuple<int, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::vector<Node> nodes;
  std::unordered_map<WorldState, int, pddl::WorldStateHash> best_g;
  nodes.push_back({start, -1, 0, 0});
  best_g.emplace(start, 0);
  open.emplace(0, 0);
  std::size_t expanded = 0;
  while (!open.empty()) {
    auto [g, id] = open.top();
    open.pop();
    const Node node = nodes[id];
    if (best_g[node.state] < g) continue;
    if (task.goal_satisfied(node.state)) return extract(task, nodes, static_cast<std::int64_t>(id));
    if (++expanded > max_states) {
      throw ResourceLimitError("optimal_plan_bfs: state limit of " + std::to_string(max_states) + " reached");
    }
    for (std::size_t ai = 0; ai < task.actions.size(); ++ai) {
      const auto& act = task.actions[ai];
      if (!pddl::applicable(node.state, act)) continue;
      WorldState next = pddl::apply_action(node.state, act);
      const int ng = g + act.cost;
      auto it = best_g.find(next);
      if (it != best_g.end() && it->second <= ng) continue;
      best_g[next] = ng;
      nodes.push_back({std::move(next), static_cast<std::int64_t>(id), ai, ng});
      open.emplace(ng, nodes.size() - 1);
    }
  }
  return std::nullopt;
}

Validation validate_plan(const GroundedTask& task, const WorldState& start, const Plan& plan) {
  WorldState state = start;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const pddl::GroundedAction* a = task.find_action(plan.steps[i].name);
    if (a == nullptr) return {false, i, "unknown action " + plan.steps[i].name};
    if (!pddl::applicable(state, *a)) return {false, i, "precondition of " + a->name + " does not hold"};
    state = pddl::apply_action(state, *a);
  }
  if (!task.goal_satisfied(state)) return {false, plan.steps.size(), "goal not satisfied"};
  return {};
}

}  // namespace mmrec::planner
