// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/reconciler/world.hpp"

#include <algorithm>

#include "mmrec/nlu/types.hpp"
#include "mmrec/pddl/error.hpp"

namespace mmrec::reconciler {

namespace {

std::vector<std::string> spell(const pddl::GroundedTask& task, const pddl::AtomSet& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back(task.atoms.at(id));
  return out;
}

std::string predicate_of(const std::string& atom) {
  // "(pred a b)" -> "pred"
  const auto end = atom.find_first_of(" )", 1);
  return atom.substr(1, end - 1);
}

}  // namespace

ActionAtoms materialize(const pddl::GroundedTask& task, const pddl::GroundedAction& a) {
  return ActionAtoms{a.name, a.schema, a.agent, a.args, spell(task, a.pre), spell(task, a.add), spell(task, a.del)};
}

std::vector<ActionAtoms> materialize(const pddl::GroundedTask& task, const planner::Plan& plan) {
  std::vector<ActionAtoms> out;
  out.reserve(plan.steps.size());
  for (const auto& s : plan.steps) out.push_back(materialize(task, s));
  return out;
}

ActionAtoms idle_action(const std::string& agent) {
  ActionAtoms a;
  a.name = std::string(nlu::kNoAction);
  a.agent = agent;
  return a;
}

bool is_idle(const ActionAtoms& a) { return a.name == nlu::kNoAction; }

World::World(const pddl::Domain& domain, std::set<std::string> atoms) : atoms_(std::move(atoms)) {
  for (auto& p : domain.fluent_predicates()) fluent_predicates_.insert(p);
}

bool World::is_fluent(const std::string& atom) const { return fluent_predicates_.count(predicate_of(atom)) != 0; }

bool World::applicable(const ActionAtoms& a) const {
  if (is_idle(a)) return true;
  return std::all_of(a.pre.begin(), a.pre.end(), [&](const std::string& p) { return holds(p); });
}

void World::apply(const ActionAtoms& a) {
  if (is_idle(a)) return;
  for (const auto& p : a.pre) {
    if (!holds(p)) {
      throw pddl::PddlError(pddl::ErrorKind::PreconditionViolated,
                            "action " + a.name + " requires " + p + " which does not hold");
    }
  }
  for (const auto& d : a.del) atoms_.erase(d);
  for (const auto& d : a.add) atoms_.insert(d);
}

bool World::satisfies(const std::vector<std::string>& goal) const {
  return std::all_of(goal.begin(), goal.end(), [&](const std::string& g) { return holds(g); });
}

pddl::WorldState World::planning_state(const pddl::GroundedTask& task) const {
  pddl::WorldState s(task.atoms.size());
  for (pddl::AtomId id = 0; id < task.atoms.size(); ++id) {
    const auto& atom = task.atoms[id];
    if (is_fluent(atom) ? holds(atom) : task.init.contains(id)) s.insert(id);
  }
  return s;
}

World initial_world(const pddl::Domain& domain, const pddl::GroundedTask& truth) {
  std::set<std::string> atoms;
  for (auto id : truth.init.atoms()) atoms.insert(truth.atoms[id]);
  return World(domain, std::move(atoms));
}

std::vector<std::string> goal_atoms(const pddl::GroundedTask& task) { return spell(task, task.goal); }

}  // namespace mmrec::reconciler
