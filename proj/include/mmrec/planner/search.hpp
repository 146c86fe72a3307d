// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "mmrec/planner/plan.hpp"
#include "mmrec/pddl/task.hpp"

namespace mmrec::planner {

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SearchLimits {
  std::size_t max_nodes = 1'000'000;
};

struct SearchStats {
  std::size_t expanded = 0;
  std::size_t generated = 0;
};

/// A* ordered by g + h_add, ties broken by h_add and then by generation order
/// (successors are generated in lexicographic action order). After the first
/// solution the search keeps running, pruning with the admissible h_max, so
/// the returned plan has minimum cost. Returns nullopt when the goal is
/// unreachable. Throws ResourceLimitError if the node cap is hit before any
/// plan was found; if a plan is already known it is returned instead.
std::optional<Plan> find_plan(const pddl::GroundedTask& task, const pddl::WorldState& start,
                              const SearchLimits& limits = {}, SearchStats* stats = nullptr);

/// Uniform-cost search (breadth-first for unit costs). Used as the optimality
/// oracle for find_plan. Throws ResourceLimitError past `max_states` expansions.
std::optional<Plan> optimal_plan_bfs(const pddl::GroundedTask& task, const pddl::WorldState& start,
                                     std::size_t max_states = 100'000);

/// Additive and max heuristics for `state`; -1 means the goal is unreachable
/// under delete relaxation.
int h_add(const pddl::GroundedTask& task, const pddl::WorldState& state);
int h_max(const pddl::GroundedTask& task, const pddl::WorldState& state);

struct Validation {
  bool valid = true;
  std::size_t step_index = 0;
  std::string reason;
};

/// Sequential applicability from `start`, then goal check. Steps are matched
/// to `task` by name, so plans from other compilations can be validated too.
Validation validate_plan(const pddl::GroundedTask& task, const pddl::WorldState& start, const Plan& plan);

}  // namespace mmrec::planner
