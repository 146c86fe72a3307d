// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <string>
#include <vector>

#include "mmrec/pddl/ast.hpp"
#include "mmrec/pddl/task.hpp"
#include "mmrec/planner/plan.hpp"

namespace mmrec::reconciler {

/// A grounded action with its atoms spelled out, so it can be checked against
/// a world that is shared by agents grounding different tasks.
struct ActionAtoms {
  std::string name;
  std::string schema;
  std::string agent;
  std::vector<std::string> args;
  std::vector<std::string> pre;
  std::vector<std::string> add;
  std::vector<std::string> del;

  friend bool operator==(const ActionAtoms&, const ActionAtoms&) = default;
};

ActionAtoms materialize(const pddl::GroundedTask& task, const pddl::GroundedAction& action);
std::vector<ActionAtoms> materialize(const pddl::GroundedTask& task, const planner::Plan& plan);

/// Placeholder used when an agent is observed doing nothing.
ActionAtoms idle_action(const std::string& agent);
bool is_idle(const ActionAtoms& a);

/// The physical state both agents act in. Only fluent atoms (predicates some
/// action can change) are ever consulted by agents; static atoms are each
/// agent's own knowledge.
class World {
 public:
  World() = default;
  World(const pddl::Domain& domain, std::set<std::string> atoms);

  const std::set<std::string>& atoms() const { return atoms_; }
  bool is_fluent(const std::string& atom) const;
  bool holds(const std::string& atom) const { return atoms_.count(atom) != 0; }
  bool applicable(const ActionAtoms& a) const;
  /// Throws pddl::PddlError(PreconditionViolated) when not applicable.
  void apply(const ActionAtoms& a);
  bool satisfies(const std::vector<std::string>& goal) const;

  /// An agent's planning start: its own static beliefs plus the world's
  /// fluent atoms that its task can express.
  pddl::WorldState planning_state(const pddl::GroundedTask& task) const;

  friend bool operator==(const World&, const World&) = default;

 private:
  std::set<std::string> fluent_predicates_;
  std::set<std::string> atoms_;
};

World initial_world(const pddl::Domain& domain, const pddl::GroundedTask& truth);
std::vector<std::string> goal_atoms(const pddl::GroundedTask& task);

}  // namespace mmrec::reconciler
