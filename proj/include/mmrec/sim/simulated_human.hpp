// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mmrec/context/compiler.hpp"
#include "mmrec/context/context_model.hpp"
#include "mmrec/nlu/types.hpp"
#include "mmrec/planner/plan.hpp"
#include "mmrec/reconciler/types.hpp"
#include "mmrec/reconciler/world.hpp"

namespace mmrec::sim {

/// Scripted stand-in for the human. It plans with the same planner and
/// compiler as the robot, over its own context, and talks only through the
/// structured grammar.
class SimulatedHuman {
 public:
  SimulatedHuman(pddl::Domain domain, pddl::Problem problem, context::ContextModel ctx, std::string self = "human",
                 std::string teammate = "robot");

  const context::ContextModel& ctx() const { return ctx_; }
  const context::CompiledModel& model() const { return model_; }
  /// Current execution plans from the world (pi^H, pi^{H(R)}).
  const planner::AgentPlanPair& plans() const { return plans_; }
  /// Joint plan from this model's initial state, for metrics only.
  const std::optional<planner::Plan>& initial_plan() const { return initial_plan_; }

  void replan(const reconciler::World& world);
  /// The world was reset (rehearsal): forget the history and replan.
  void reset(const reconciler::World& world);
  /// A dialogue ended. `progress` means some context changed in it.
  void resume(const reconciler::World& world, bool progress);

  /// The next own step to take, already counted as taken; none to wait.
  std::optional<reconciler::ActionAtoms> next_action(const reconciler::World& world);
  /// Compares the robot's action (or idling) to pi^{H(R)}; speaks up on a
  /// mismatch.
  std::optional<nlu::Utterance> maybe_interrupt(const reconciler::ActionAtoms& observed_robot_action,
                                                const reconciler::World& world);
  /// Facts that explain why this agent deviated from what the robot expected.
  std::vector<context::Fact> explain_deviation(const reconciler::Violation& v) const;
  /// The answer to a robot interruption: facts if there are any, else a question.
  nlu::Utterance respond(const reconciler::Violation& v);
  /// Learns the explained facts and returns the restatement.
  nlu::Utterance receive_explanation(const reconciler::Explanation& e);

  const std::vector<context::Fact>& told() const { return told_; }

 private:
  std::vector<context::Fact> untold() const;
  std::vector<reconciler::ActionAtoms> trace() const;
  void recompile();
  nlu::Utterance say_facts(const std::vector<context::Fact>& facts);

  pddl::Domain domain_;
  pddl::Problem problem_;
  std::string self_;
  std::string teammate_;
  context::ContextModel ctx_;
  context::CompiledModel model_;
  std::optional<planner::Plan> initial_plan_;
  planner::AgentPlanPair plans_;
  std::vector<reconciler::ActionAtoms> joint_steps_;
  std::vector<bool> done_;
  std::vector<reconciler::ActionAtoms> history_;
  std::vector<context::Fact> told_;
  std::vector<context::Fact> received_;
  std::set<std::pair<std::string, std::string>> discussed_;
  std::optional<std::pair<std::string, std::string>> last_topic_;
};

}  // namespace mmrec::sim
