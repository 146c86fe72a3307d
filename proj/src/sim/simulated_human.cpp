// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/sim/simulated_human.hpp"

#include <algorithm>

#include "mmrec/nlu/grammar.hpp"
#include "mmrec/planner/search.hpp"
#include "mmrec/reconciler/relevance.hpp"

namespace mmrec::sim {

using context::Fact;
using reconciler::ActionAtoms;
using reconciler::World;

namespace {

bool has_key(const std::vector<Fact>& v, const Fact& f) {
  return std::any_of(v.begin(), v.end(), [&](const Fact& g) { return g.key() == f.key(); });
}

std::optional<std::size_t> first_pending(const std::vector<ActionAtoms>& steps, const std::vector<bool>& done,
                                         const std::string& agent) {
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!done[i] && steps[i].agent == agent) return i;
  }
  return std::nullopt;
}

bool pending_before(const std::vector<ActionAtoms>& steps, const std::vector<bool>& done, std::size_t idx,
                    const std::string& agent) {
  for (std::size_t i = 0; i < idx; ++i) {
    if (!done[i] && steps[i].agent == agent) return true;
  }
  return false;
}

}  // namespace

SimulatedHuman::SimulatedHuman(pddl::Domain domain, pddl::Problem problem, context::ContextModel ctx,
                               std::string self, std::string teammate)
    : domain_(std::move(domain)),
      problem_(std::move(problem)),
      self_(std::move(self)),
      teammate_(std::move(teammate)),
      ctx_(std::move(ctx)) {
  recompile();
}

void SimulatedHuman::recompile() {
  model_ = context::compile_context(domain_, problem_, ctx_);
  initial_plan_ = planner::find_plan(model_.task, model_.task.init);
}

void SimulatedHuman::replan(const World& world) {
  auto plan = planner::find_plan(model_.task, world.planning_state(model_.task));
  plans_ = plan ? planner::split_plan(*plan, teammate_, self_, planner::PolicyOwner::HumanPredictsRobot,
                                      planner::PolicyOwner::Human)
                : planner::AgentPlanPair{};
  joint_steps_ = reconciler::materialize(model_.task, plans_.joint);
  done_.assign(joint_steps_.size(), false);
}

void SimulatedHuman::reset(const World& world) {
  history_.clear();
  replan(world);
}

void SimulatedHuman::resume(const World& world, bool progress) {
  if (progress) {
    discussed_.clear();
  } else if (last_topic_) {
    discussed_.insert(*last_topic_);
  }
  last_topic_.reset();
  replan(world);
}

std::vector<ActionAtoms> SimulatedHuman::trace() const {
  auto out = history_;
  for (std::size_t i = 0; i < joint_steps_.size(); ++i) {
    if (!done_[i]) out.push_back(joint_steps_[i]);
  }
  return out;
}

std::vector<Fact> SimulatedHuman::untold() const {
  std::vector<Fact> out;
  for (const auto& [_, f] : ctx_.facts()) {
    if (!has_key(told_, f) && !has_key(received_, f)) out.push_back(f);
  }
  return out;
}

std::optional<ActionAtoms> SimulatedHuman::next_action(const World& world) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto idx = first_pending(joint_steps_, done_, self_);
    if (!idx) return std::nullopt;
    const auto a = joint_steps_[*idx];
    if (world.applicable(a)) {
      done_[*idx] = true;
      history_.push_back(a);
      return a;
    }
    if (pending_before(joint_steps_, done_, *idx, teammate_)) return std::nullopt;
    if (attempt == 0) {
      replan(world);
      continue;
    }
    // Still believed possible after replanning: try it and let it fail.
    done_[*idx] = true;
    return a;
  }
  return std::nullopt;
}

std::optional<nlu::Utterance> SimulatedHuman::maybe_interrupt(const ActionAtoms& observed, const World& world) {
  const auto idx = first_pending(joint_steps_, done_, teammate_);
  if (!reconciler::is_idle(observed)) history_.push_back(observed);
  if (idx && observed.name == joint_steps_[*idx].name) {
    done_[*idx] = true;
    return std::nullopt;
  }
  if (reconciler::is_idle(observed)) {
    // Waiting is fine unless the step this agent expects is ready to go.
    if (!idx || pending_before(joint_steps_, done_, *idx, self_)) return std::nullopt;
    if (!world.applicable(joint_steps_[*idx])) return std::nullopt;
  }
  const ActionAtoms expected = idx ? joint_steps_[*idx] : reconciler::idle_action(teammate_);
  const std::pair<std::string, std::string> topic{expected.name, observed.name};
  if (discussed_.count(topic) != 0) {
    if (!reconciler::is_idle(observed)) replan(world);
    return std::nullopt;
  }
  last_topic_ = topic;
  std::optional<ActionAtoms> foil;
  if (!reconciler::is_idle(observed)) foil = observed;
  const auto tr = trace();
  auto facts = reconciler::select_relevant(untold(), tr, expected.name, foil);
  if (!facts.empty()) return say_facts(facts);
  return nlu::Utterance{nlu::Speaker::Human, nlu::render_query_utterance(nlu::Query{observed.name, expected.name}), 0};
}

std::vector<Fact> SimulatedHuman::explain_deviation(const reconciler::Violation& v) const {
  const auto candidates = untold();
  const auto tr = trace();
  std::optional<ActionAtoms> foil;
  if (!reconciler::is_idle(v.expected)) foil = v.expected;
  auto facts = reconciler::select_relevant(candidates, tr, v.observed.name, foil);
  if (facts.empty() && !candidates.empty()) facts.push_back(candidates.front());
  return facts;
}

nlu::Utterance SimulatedHuman::say_facts(const std::vector<Fact>& facts) {
  for (const auto& f : facts) {
    if (!has_key(told_, f)) told_.push_back(f);
  }
  return nlu::Utterance{nlu::Speaker::Human, nlu::render_facts_utterance(facts, nlu::Attribution::MissingFromRobot), 0};
}

nlu::Utterance SimulatedHuman::respond(const reconciler::Violation& v) {
  last_topic_ = std::pair<std::string, std::string>{v.expected.name, v.observed.name};
  auto facts = explain_deviation(v);
  if (!facts.empty()) return say_facts(facts);
  return nlu::Utterance{nlu::Speaker::Human, nlu::render_query_utterance(nlu::Query{v.expected.name, v.observed.name}),
                        0};
}

nlu::Utterance SimulatedHuman::receive_explanation(const reconciler::Explanation& e) {
  for (const auto& f : e.facts) {
    if (!has_key(received_, f)) received_.push_back(f);
  }
  auto next = ctx_.add_facts(e.facts);
  if (next.revision() != ctx_.revision()) {
    ctx_ = std::move(next);
    recompile();
  }
  return nlu::Utterance{nlu::Speaker::Human,
                        nlu::render_facts_utterance(e.facts, nlu::Attribution::MissingFromHuman), 0};
}

}  // namespace mmrec::sim
