// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmrec/context/compiler.hpp"
#include "mmrec/context/context_model.hpp"
#include "mmrec/divergence/divergence.hpp"
#include "mmrec/nlu/extractor.hpp"
#include "mmrec/planner/plan.hpp"
#include "mmrec/reconciler/types.hpp"
#include "mmrec/reconciler/world.hpp"

namespace mmrec::reconciler {

/// Raised when an operation is called outside the phases that accept it.
class PhaseError : public std::logic_error {
 public:
  PhaseError(const std::string& op, Phase phase);
};

/// Raised for a live action name the robot's task does not contain.
class UnknownActionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SessionConfig {
  Mode mode = Mode::Simulated;
  nlu::NluMode nlu = nlu::NluMode::Grammar;
  std::uint64_t seed = 0;
  double epsilon = divergence::kDefaultEpsilon;
  bool tolerate_reordering = false;
  /// Live mode ends after this many consecutive human actions match.
  int live_match_window = 3;
  int max_reexplanations = 2;
  std::string robot_agent = "robot";
  std::string human_agent = "human";
  std::string label;
};

struct SessionInputs {
  pddl::Domain domain;
  pddl::Problem problem;
  /// c^R_0.
  context::ContextModel robot_ctx;
  /// The physical world the agents act in.
  World world;
};

/// What the metrics need to know about the human side. In simulated mode the
/// harness supplies the sim-human's context and its joint plan from the
/// initial state; agents never see it.
struct HumanView {
  context::ContextModel ctx;
  std::optional<planner::Plan> joint;
};
using HumanViewProbe = std::function<HumanView()>;

struct RobotStepResult {
  std::optional<ActionAtoms> executed;
  bool waited = false;
  std::optional<nlu::Utterance> notice;  // stuck notice, phase now AwaitingClarification
};

struct ObservationResult {
  bool applied = false;
  std::optional<Violation> violation;
  std::optional<nlu::Utterance> interruption;
};

struct UtteranceResult {
  nlu::FactExtraction extraction;
  std::optional<Explanation> explanation;
  nlu::Utterance reply;
  bool model_changed = false;
  bool understood = true;
};

struct RestatementResult {
  bool matched = false;
  bool unresolved = false;
  std::vector<context::FactKey> missing;
  std::optional<nlu::Utterance> reply;
};

class Session {
 public:
  Session(SessionInputs inputs, SessionConfig config, std::shared_ptr<nlu::ChatTransport> transport = nullptr);

  /// Metrics only. Must be called before start() to get a t = 0 row.
  void set_metrics_probe(HumanViewProbe probe, std::optional<context::ContextModel> ground_truth);

  /// Compiles c^R_0, plans, logs the t = 0 snapshot.
  void start();

  // State.
  const SessionConfig& config() const { return config_; }
  Phase phase() const { return phase_; }
  TerminationReason termination() const { return termination_; }
  int iteration() const { return t_; }
  std::uint64_t tick() const { return events_.size(); }
  const context::ContextModel& robot_ctx() const { return robot_ctx_; }
  const context::CompiledModel& robot_model() const { return model_; }
  const planner::AgentPlanPair& plans() const { return plans_; }
  /// Steps of the current joint plan not yet executed (or observed).
  std::vector<ActionAtoms> pending_steps() const;
  std::optional<ActionAtoms> next_robot_step() const;
  std::optional<ActionAtoms> expected_human_step() const;
  const World& world() const { return world_; }
  std::uint64_t world_epoch() const { return world_epoch_; }
  bool rehearsing() const { return world_epoch_ > 0; }
  const ExplanationLog& explanations() const { return explanations_; }
  const std::vector<Event>& events() const { return events_; }
  std::vector<Event> events_since(std::uint64_t tick) const;
  const std::vector<context::Fact>& told_to_human() const { return told_to_human_; }
  const std::optional<Explanation>& pending_explanation() const { return pending_; }
  const std::optional<Violation>& open_violation() const { return open_violation_; }
  const std::vector<divergence::DivergenceReport>& metrics() const { return metrics_; }
  const std::vector<nlu::Utterance>& transcript() const { return transcript_; }
  std::size_t violation_count() const { return violation_count_; }
  std::size_t trigger_count() const { return trigger_count_; }
  /// Executed actions followed by the pending plan: the robot's account of
  /// how the task unfolds, used to justify its choices.
  std::vector<ActionAtoms> robot_trace() const;
  /// Names of grounded human actions applicable in the world right now.
  std::vector<std::string> available_human_actions() const;
  divergence::DivergenceReport current_report() const;

  // Operations.
  RobotStepResult robot_step();
  ObservationResult observe_human_action(const ActionAtoms& action);
  /// Live actions arrive by name and are resolved in the robot's task.
  ObservationResult observe_human_action(const std::string& action_name);
  UtteranceResult handle_human_utterance(const nlu::Utterance& u);
  RestatementResult confirm_restatement(const nlu::Utterance& u);
  /// Neither agent acted in a full tick.
  void notify_stall();
  bool check_termination();
  void terminate(TerminationReason reason, const std::string& detail);

  static nlu::Utterance make_interruption(const Violation& v);

 private:
  void log(const std::string& kind, nlohmann::json payload);
  nlu::Utterance robot_says(const std::string& text);
  void recompile();
  void replan(const std::string& reason);
  void snapshot_metrics();
  void bump_iteration();
  void open_dialogue(const Violation& v, const std::string& text);
  void close_dialogue();
  nlohmann::json plan_payload(const std::string& reason) const;
  std::optional<ActionAtoms> resolve_action(const std::string& name) const;
  std::vector<context::Fact> answer_query(const nlu::Query& q) const;
  std::vector<context::Fact> untold_facts() const;
  void remember_heard(const std::vector<context::Fact>& facts);
  HumanView human_view() const;

  SessionConfig config_;
  pddl::Domain domain_;
  pddl::Problem problem_;
  World initial_world_;
  World world_;
  std::uint64_t world_epoch_ = 0;
  int iteration_at_rehearsal_ = -1;
  nlu::FactExtractor extractor_;

  context::ContextModel robot_ctx_;
  context::CompiledModel model_;
  std::optional<planner::Plan> initial_plan_;  // robot joint plan from its model's initial state
  planner::AgentPlanPair plans_;
  std::vector<ActionAtoms> joint_steps_;
  std::vector<bool> done_;
  std::vector<ActionAtoms> history_;
  std::map<std::string, ActionAtoms> observed_;  // every human action seen, applied or not

  Phase phase_ = Phase::Executing;
  TerminationReason termination_ = TerminationReason::None;
  int t_ = 0;
  bool started_ = false;

  ExplanationLog explanations_;
  std::optional<Explanation> pending_;
  int reexplanations_ = 0;
  std::optional<Violation> open_violation_;
  int reasks_ = 0;
  std::set<std::pair<std::string, std::string>> suppressed_;
  std::vector<context::Fact> told_to_human_;
  std::vector<context::Fact> heard_from_human_;
  std::size_t violation_count_ = 0;
  std::size_t trigger_count_ = 0;
  int match_streak_ = 0;
  int violations_since_replan_ = 0;
  int stalls_ = 0;

  HumanViewProbe probe_;
  std::optional<context::ContextModel> ground_truth_;
  std::vector<divergence::DivergenceReport> metrics_;

  std::vector<Event> events_;
  std::vector<nlu::Utterance> transcript_;
};

}  // namespace mmrec::reconciler
