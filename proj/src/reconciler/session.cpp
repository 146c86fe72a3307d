// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/reconciler/session.hpp"

#include <algorithm>

#include "mmrec/context/fact_io.hpp"
#include "mmrec/nlu/grammar.hpp"
#include "mmrec/planner/search.hpp"
#include "mmrec/reconciler/relevance.hpp"

namespace mmrec::reconciler {

using context::ContextModel;
using context::Fact;
using nlu::Attribution;
using nlu::Utterance;

namespace {

constexpr const char* kReask = "I still do not see why. Is there something I do not know?";
constexpr const char* kMoveOn = "Let us move on for now.";
constexpr const char* kNotUnderstood = "I did not understand that. Could you rephrase?";
constexpr const char* kNotCaught = "I did not catch that. Could you restate it?";

std::string sentence(std::string s) {
  if (!s.empty() && s.back() != '.' && s.back() != '!' && s.back() != '?') s += '.';
  return s;
}

std::string glosses(const std::vector<Fact>& facts) {
  std::string out;
  for (const auto& f : facts) {
    if (!out.empty()) out += ' ';
    out += sentence(f.gloss);
  }
  return out;
}

std::string acknowledgement(const std::vector<Fact>& facts) {
  return "Thank you, I did not know that. " + glosses(facts) + " I have updated my plan.";
}

std::string explanation_text(const std::vector<Fact>& facts) {
  return "Let me explain. " + glosses(facts) + " Could you restate what I told you?";
}

nlohmann::json names(const planner::Plan& p) { return p.names(); }

bool legal(Phase from, Phase to) {
  if (to == Phase::Terminated) return true;
  if (from == to) return true;
  switch (from) {
    case Phase::Executing: return to == Phase::AwaitingClarification || to == Phase::AwaitingRestatement;
    case Phase::AwaitingClarification:
    case Phase::AwaitingRestatement: return to == Phase::Executing;
    case Phase::Terminated: return false;
  }
  return false;
}

nlohmann::json extraction_json(const nlu::FactExtraction& e) {
  nlohmann::json j{{"attribution", nlu::to_string(e.attribution)},
                   {"source", nlu::to_string(e.source)},
                   {"facts", facts_json(e.facts)}};
  if (e.query) j["query"] = {{"asked", e.query->asked}, {"instead_of", e.query->instead_of}};
  return j;
}

}  // namespace

PhaseError::PhaseError(const std::string& op, Phase phase)
    : std::logic_error(op + " is not accepted in phase " + to_string(phase)) {}

Session::Session(SessionInputs inputs, SessionConfig config, std::shared_ptr<nlu::ChatTransport> transport)
    : config_(std::move(config)),
      domain_(std::move(inputs.domain)),
      problem_(std::move(inputs.problem)),
      initial_world_(inputs.world),
      world_(std::move(inputs.world)),
      extractor_(config_.nlu, context::Vocabulary(domain_, problem_), std::move(transport)),
      robot_ctx_(std::move(inputs.robot_ctx)) {}

void Session::set_metrics_probe(HumanViewProbe probe, std::optional<ContextModel> ground_truth) {
  probe_ = std::move(probe);
  ground_truth_ = std::move(ground_truth);
}

void Session::log(const std::string& kind, nlohmann::json payload) {
  events_.push_back(Event{events_.size() + 1, kind, std::move(payload)});
}

Utterance Session::robot_says(const std::string& text) {
  Utterance u{nlu::Speaker::Robot, text, tick()};
  log("utterance", {{"speaker", "robot"}, {"text", text}});
  transcript_.push_back(u);
  return u;
}

void Session::recompile() {
  model_ = context::compile_context(domain_, problem_, robot_ctx_);
  initial_plan_ = planner::find_plan(model_.task, model_.task.init);
  if (initial_plan_) initial_plan_->owner = planner::PolicyOwner::Joint;
}

nlohmann::json Session::plan_payload(const std::string& reason) const {
  return {{"reason", reason},
          {"revision", robot_ctx_.revision()},
          {"solvable", !joint_steps_.empty() || world_.satisfies(goal_atoms(model_.task))},
          {"joint", names(plans_.joint)},
          {"robot", names(plans_.robot_projection)},
          {"expected_human", names(plans_.human_projection)},
          {"rehearsal", world_epoch_}};
}

void Session::replan(const std::string& reason) {
  const auto start = world_.planning_state(model_.task);
  auto plan = planner::find_plan(model_.task, start);
  plans_ = plan ? planner::split_plan(*plan, config_.robot_agent, config_.human_agent, planner::PolicyOwner::Robot,
                                      planner::PolicyOwner::RobotPredictsHuman)
                : planner::AgentPlanPair{};
  joint_steps_ = materialize(model_.task, plans_.joint);
  done_.assign(joint_steps_.size(), false);
  violations_since_replan_ = 0;
  log(reason == "start" ? "plan" : "replan", plan_payload(reason));
}

HumanView Session::human_view() const {
  if (probe_) return probe_();
  // Live: the human's actual context is unobservable, so use the robot's
  // bookkeeping of what it has told the human.
  HumanView v;
  v.ctx = ContextModel(context::Owner::Human, told_to_human_);
  const auto compiled = context::compile_context(domain_, problem_, v.ctx);
  v.joint = planner::find_plan(compiled.task, compiled.task.init);
  return v;
}

divergence::DivergenceReport Session::current_report() const {
  divergence::DivergenceReport r;
  r.iteration = t_;
  r.epsilon = config_.epsilon;
  const HumanView hv = human_view();
  const planner::Plan robot_joint = initial_plan_.value_or(planner::Plan{});
  const planner::Plan human_joint = hv.joint.value_or(planner::Plan{});
  r.d_hr = divergence::plan_divergence(planner::project_plan(human_joint, config_.robot_agent),
                                       planner::project_plan(robot_joint, config_.robot_agent));
  r.d_rh = divergence::plan_divergence(planner::project_plan(robot_joint, config_.human_agent),
                                       planner::project_plan(human_joint, config_.human_agent));
  if (ground_truth_) {
    r.fact_ed_r_gt = context::edit_distance(robot_ctx_, *ground_truth_);
    r.fact_ed_h_gt = context::edit_distance(hv.ctx, *ground_truth_);
  }
  r.fact_ed_r_h = context::edit_distance(robot_ctx_, hv.ctx);
  return r;
}

void Session::snapshot_metrics() {
  auto r = current_report();
  log("metrics", {{"t", r.iteration},
                  {"d_hr", r.d_hr},
                  {"d_rh", r.d_rh},
                  {"ed_r_gt", r.fact_ed_r_gt},
                  {"ed_h_gt", r.fact_ed_h_gt},
                  {"ed_r_h", r.fact_ed_r_h}});
  metrics_.push_back(r);
}

void Session::bump_iteration() {
  ++t_;
  snapshot_metrics();
}

void Session::start() {
  if (started_) throw std::logic_error("session already started");
  started_ = true;
  log("plan", {{"reason", "session"},
               {"mode", to_string(config_.mode)},
               {"nlu", nlu::to_string(config_.nlu)},
               {"seed", config_.seed},
               {"label", config_.label}});
  recompile();
  replan("start");
  snapshot_metrics();
  if (joint_steps_.empty() && !world_.satisfies(goal_atoms(model_.task))) {
    Violation v{idle_action(config_.robot_agent), idle_action(config_.robot_agent), 0, true};
    open_dialogue(v, "I cannot find a way to finish the task. Can you tell me what I am missing?");
  }
}

std::vector<ActionAtoms> Session::pending_steps() const {
  std::vector<ActionAtoms> out;
  for (std::size_t i = 0; i < joint_steps_.size(); ++i) {
    if (!done_[i]) out.push_back(joint_steps_[i]);
  }
  return out;
}

namespace {

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

std::optional<ActionAtoms> Session::next_robot_step() const {
  if (auto i = first_pending(joint_steps_, done_, config_.robot_agent)) return joint_steps_[*i];
  return std::nullopt;
}

std::optional<ActionAtoms> Session::expected_human_step() const {
  if (auto i = first_pending(joint_steps_, done_, config_.human_agent)) return joint_steps_[*i];
  return std::nullopt;
}

std::vector<ActionAtoms> Session::robot_trace() const {
  auto out = history_;
  for (auto& s : pending_steps()) out.push_back(std::move(s));
  return out;
}

std::vector<std::string> Session::available_human_actions() const {
  std::vector<std::string> out;
  for (const auto& a : model_.task.actions) {
    if (a.agent == config_.human_agent && world_.applicable(materialize(model_.task, a))) out.push_back(a.name);
  }
  return out;
}

std::vector<Event> Session::events_since(std::uint64_t tick) const {
  std::vector<Event> out;
  for (const auto& e : events_) {
    if (e.tick > tick) out.push_back(e);
  }
  return out;
}

void Session::open_dialogue(const Violation& v, const std::string& text) {
  if (!legal(phase_, Phase::AwaitingClarification)) throw PhaseError("open_dialogue", phase_);
  phase_ = Phase::AwaitingClarification;
  open_violation_ = v;
  reasks_ = 0;
  ++trigger_count_;
  log("interruption", {{"text", text}, {"expected", v.expected.name}, {"observed", v.observed.name}});
  robot_says(text);
}

void Session::close_dialogue() {
  open_violation_.reset();
  phase_ = Phase::Executing;
  stalls_ = 0;
  replan("dialogue_closed");
}

Utterance Session::make_interruption(const Violation& v) {
  return Utterance{nlu::Speaker::Robot,
                   "I expected you to " + v.expected.name + " but I observed " + v.observed.name +
                       ". Can you tell me why?",
                   0};
}

RobotStepResult Session::robot_step() {
  if (phase_ != Phase::Executing) throw PhaseError("robot_step", phase_);
  RobotStepResult r;
  enum class Outcome { Executed, Waited, Idle, Blocked };
  auto attempt = [&]() {
    auto idx = first_pending(joint_steps_, done_, config_.robot_agent);
    if (!idx) return Outcome::Idle;
    const auto& a = joint_steps_[*idx];
    if (world_.applicable(a)) {
      world_.apply(a);
      done_[*idx] = true;
      history_.push_back(a);
      stalls_ = 0;
      log("robot_action", {{"action", a.name}, {"rehearsal", world_epoch_}});
      r.executed = a;
      return Outcome::Executed;
    }
    if (pending_before(joint_steps_, done_, *idx, config_.human_agent)) {
      r.waited = true;
      return Outcome::Waited;
    }
    return Outcome::Blocked;
  };
  // Idle is fine while the goal holds or the human still owes steps.
  auto settled = [&](Outcome o) {
    if (o == Outcome::Executed || o == Outcome::Waited) return true;
    return o == Outcome::Idle && (world_.satisfies(goal_atoms(model_.task)) || !pending_steps().empty());
  };
  if (settled(attempt())) return r;
  const auto failed = next_robot_step();
  replan(failed ? "precondition_failed" : "plan_exhausted");
  if (settled(attempt())) return r;
  Violation v{failed.value_or(idle_action(config_.robot_agent)), idle_action(config_.robot_agent), 0, true};
  const std::string text = failed ? "I tried to " + failed->name + " but I could not. Can you tell me why?"
                                  : "I cannot find a way to finish the task. Can you tell me what I am missing?";
  open_dialogue(v, text);
  r.notice = transcript_.back();
  return r;
}

ObservationResult Session::observe_human_action(const std::string& action_name) {
  const auto* a = model_.task.find_action(action_name);
  if (!a || a->agent != config_.human_agent) throw UnknownActionError("unknown human action '" + action_name + "'");
  return observe_human_action(materialize(model_.task, *a));
}

ObservationResult Session::observe_human_action(const ActionAtoms& a) {
  if (phase_ != Phase::Executing) throw PhaseError("observe_human_action", phase_);
  ObservationResult r;
  const auto exp_idx = first_pending(joint_steps_, done_, config_.human_agent);
  const std::optional<ActionAtoms> expected =
      exp_idx ? std::optional<ActionAtoms>(joint_steps_[*exp_idx]) : std::nullopt;
  bool precondition_failed = false;
  if (is_idle(a)) {
    // Idling is a deviation only when the expected step is ready to go.
    if (!expected || pending_before(joint_steps_, done_, *exp_idx, config_.robot_agent) ||
        !world_.applicable(*expected)) {
      return r;
    }
    log("human_action", {{"action", a.name}, {"expected", expected->name}, {"applied", false}});
  } else {
    observed_.insert_or_assign(a.name, a);
    r.applied = world_.applicable(a);
    if (r.applied) {
      world_.apply(a);
      history_.push_back(a);
      stalls_ = 0;
    }
    precondition_failed = !r.applied;
    log("human_action", {{"action", a.name},
                         {"expected", expected ? expected->name : std::string(nlu::kNoAction)},
                         {"applied", r.applied},
                         {"rehearsal", world_epoch_}});
    if (r.applied && expected && a.name == expected->name) {
      done_[*exp_idx] = true;
      ++match_streak_;
      return r;
    }
    if (r.applied && config_.tolerate_reordering) {
      for (std::size_t i = 0; i < joint_steps_.size(); ++i) {
        if (!done_[i] && joint_steps_[i].agent == config_.human_agent && joint_steps_[i].name == a.name) {
          done_[i] = true;
          ++match_streak_;
          return r;
        }
      }
    }
  }
  std::size_t step_index = 0;
  if (exp_idx) {
    for (std::size_t i = 0; i < *exp_idx; ++i) step_index += joint_steps_[i].agent == config_.human_agent;
  }
  Violation v{expected.value_or(idle_action(config_.human_agent)), a, step_index, precondition_failed};
  match_streak_ = 0;
  if (suppressed_.count({v.expected.name, v.observed.name}) != 0) {
    // Already discussed without result; just keep the plan consistent.
    auto payload = to_json(v);
    payload["suppressed"] = true;
    log("violation", payload);
    if (r.applied) replan("observed_unexpected");
    return r;
  }
  ++violation_count_;
  ++violations_since_replan_;
  log("violation", to_json(v));
  const auto interruption = make_interruption(v);
  open_dialogue(v, interruption.text);
  r.violation = v;
  r.interruption = transcript_.back();
  return r;
}

std::vector<Fact> Session::untold_facts() const {
  std::vector<Fact> out;
  auto known = [](const std::vector<Fact>& v, const Fact& f) {
    return std::any_of(v.begin(), v.end(), [&](const Fact& g) { return g.key() == f.key(); });
  };
  for (const auto& [_, f] : robot_ctx_.facts()) {
    if (!known(told_to_human_, f) && !known(heard_from_human_, f)) out.push_back(f);
  }
  return out;
}

void Session::remember_heard(const std::vector<Fact>& facts) {
  for (const auto& f : facts) heard_from_human_.push_back(f);
}

std::optional<ActionAtoms> Session::resolve_action(const std::string& name) const {
  if (name == nlu::kNoAction) return std::nullopt;
  if (const auto* a = model_.task.find_action(name)) return materialize(model_.task, *a);
  if (auto it = observed_.find(name); it != observed_.end()) return it->second;
  return std::nullopt;
}

std::vector<Fact> Session::answer_query(const nlu::Query& q) const {
  const auto candidates = untold_facts();
  const auto trace = robot_trace();
  auto facts = select_relevant(candidates, trace, q.asked, resolve_action(q.instead_of));
  if (facts.empty() && !candidates.empty()) facts.push_back(candidates.front());
  return facts;
}

UtteranceResult Session::handle_human_utterance(const Utterance& u) {
  if (phase_ != Phase::Executing && phase_ != Phase::AwaitingClarification) {
    throw PhaseError("handle_human_utterance", phase_);
  }
  const bool in_dialogue = phase_ == Phase::AwaitingClarification;
  log("utterance", {{"speaker", "human"}, {"text", u.text}});
  transcript_.push_back(Utterance{nlu::Speaker::Human, u.text, tick()});
  UtteranceResult r;
  try {
    r.extraction = extractor_.extract_facts(u, robot_ctx_, told_to_human_);
  } catch (const nlu::NluError& e) {
    log("extraction", {{"error", e.what()}});
    r.understood = false;
    r.reply = robot_says(kNotUnderstood);
    return r;
  }
  log("extraction", extraction_json(r.extraction));
  const auto& ex = r.extraction;
  if (!in_dialogue && ex.attribution != Attribution::NoNewInformation) ++trigger_count_;

  if ((ex.attribution == Attribution::MissingFromRobot || ex.attribution == Attribution::Both) &&
      !ex.facts.empty()) {
    std::vector<Fact> fresh;
    for (const auto& f : ex.facts) {
      if (!robot_ctx_.contains(f.key())) fresh.push_back(f);
    }
    ContextModel next = robot_ctx_.add_facts(fresh);
    if (next.revision() != robot_ctx_.revision()) {
      context::CompiledModel compiled;
      try {
        compiled = context::compile_context(domain_, problem_, next);
      } catch (const context::CompileError& e) {
        log("extraction", {{"error", e.what()}});
        r.understood = false;
        r.reply = robot_says(kNotUnderstood);
        return r;
      }
      robot_ctx_ = std::move(next);
      model_ = std::move(compiled);
      initial_plan_ = planner::find_plan(model_.task, model_.task.init);
      remember_heard(fresh);
      suppressed_.clear();
      Explanation e{Direction::HumanToRobot, fresh, acknowledgement(fresh), t_ + 1};
      explanations_.append(e);
      log("explanation", [&] {
        auto j = to_json(e);
        j["status"] = "accepted";
        return j;
      }());
      r.model_changed = true;
      r.explanation = e;
      r.reply = robot_says(e.text);
      if (in_dialogue) {
        close_dialogue();
      } else {
        replan("model_update");
      }
      bump_iteration();
      return r;
    }
  }

  if (ex.query || (ex.attribution == Attribution::MissingFromHuman && !ex.facts.empty())) {
    std::vector<Fact> facts;
    if (ex.query) {
      facts = answer_query(*ex.query);
    } else {
      for (const auto& f : ex.facts) {
        if (std::none_of(told_to_human_.begin(), told_to_human_.end(),
                         [&](const Fact& g) { return g.key() == f.key(); })) {
          facts.push_back(*robot_ctx_.find(f.key()));
        }
      }
    }
    if (!facts.empty()) {
      if (in_dialogue) {
        // The clarification is answered by a question; resume it as the
        // explanation below.
        open_violation_.reset();
        phase_ = Phase::Executing;
      }
      pending_ = Explanation{Direction::RobotToHuman, facts, explanation_text(facts), t_};
      reexplanations_ = 0;
      phase_ = Phase::AwaitingRestatement;
      log("explanation", [&] {
        auto j = to_json(*pending_);
        j["status"] = "offered";
        return j;
      }());
      r.explanation = pending_;
      r.reply = robot_says(pending_->text);
      return r;
    }
  }

  if (in_dialogue) {
    if (reasks_ == 0) {
      ++reasks_;
      r.reply = robot_says(kReask);
      return r;
    }
    suppressed_.insert({open_violation_->expected.name, open_violation_->observed.name});
    log("interruption", {{"text", kMoveOn}, {"unresolved", true}});
    r.reply = robot_says(kMoveOn);
    close_dialogue();
    return r;
  }
  r.reply = robot_says(ex.query ? "I have nothing to add." : "OK.");
  return r;
}

RestatementResult Session::confirm_restatement(const Utterance& u) {
  if (phase_ != Phase::AwaitingRestatement) throw PhaseError("confirm_restatement", phase_);
  log("utterance", {{"speaker", "human"}, {"text", u.text}});
  transcript_.push_back(Utterance{nlu::Speaker::Human, u.text, tick()});
  RestatementResult r;
  nlu::RestatementMatch m;
  try {
    m = extractor_.match_restatement(u, pending_->facts);
  } catch (const nlu::NluError& e) {
    log("restatement", {{"error", e.what()}});
    r.reply = robot_says(kNotCaught);
    return r;
  }
  r.matched = m.matched;
  r.missing = m.missing;
  nlohmann::json missing = nlohmann::json::array();
  for (const auto& k : m.missing) missing.push_back(k.value);
  log("restatement", {{"text", u.text}, {"matched", m.matched}, {"missing", missing}, {"attempt", reexplanations_}});
  if (m.matched) {
    for (const auto& f : pending_->facts) {
      if (std::none_of(told_to_human_.begin(), told_to_human_.end(),
                       [&](const Fact& g) { return g.key() == f.key(); })) {
        told_to_human_.push_back(f);
      }
    }
    Explanation e = *pending_;
    e.iteration = t_ + 1;
    explanations_.append(e);
    pending_.reset();
    log("explanation", [&] {
      auto j = to_json(e);
      j["status"] = "delivered";
      return j;
    }());
    suppressed_.clear();
    r.reply = robot_says("Thank you, we are on the same page.");
    close_dialogue();
    bump_iteration();
    return r;
  }
  if (reexplanations_ < config_.max_reexplanations) {
    ++reexplanations_;
    r.reply = robot_says(pending_->text);
    return r;
  }
  r.unresolved = true;
  log("explanation", [&] {
    auto j = to_json(*pending_);
    j["status"] = "unresolved";
    return j;
  }());
  pending_.reset();
  r.reply = robot_says(kMoveOn);
  close_dialogue();
  return r;
}

void Session::notify_stall() {
  if (phase_ != Phase::Executing) return;
  if (++stalls_ < 2) {
    replan("stalled");
    return;
  }
  stalls_ = 0;
  const auto next = next_robot_step();
  Violation v{next.value_or(idle_action(config_.robot_agent)), idle_action(config_.human_agent), 0, true};
  open_dialogue(v, "Neither of us can make progress. Can you tell me what I am missing?");
}

void Session::terminate(TerminationReason reason, const std::string& detail) {
  if (phase_ == Phase::Terminated) return;
  phase_ = Phase::Terminated;
  termination_ = reason;
  log("terminated", {{"reason", to_string(reason)},
                     {"detail", detail},
                     {"t", t_},
                     {"n", explanations_.n()},
                     {"m", explanations_.m()}});
}

bool Session::check_termination() {
  if (phase_ == Phase::Terminated) return true;
  if (phase_ != Phase::Executing) return false;
  const bool goal = !next_robot_step() && world_.satisfies(goal_atoms(model_.task));
  if (!goal) return false;
  if (config_.mode == Mode::Live) {
    const bool human_done = !expected_human_step() && violations_since_replan_ == 0;
    if (match_streak_ >= config_.live_match_window || human_done) {
      terminate(TerminationReason::Converged, "goal reached and human behaviour matches expectation");
      return true;
    }
    return false;
  }
  if (divergence::reconciliation_complete(current_report())) {
    terminate(TerminationReason::Converged, "goal reached and policies agree");
    return true;
  }
  // Goal reached but the policies still disagree: keep talking by rehearsing
  // the task from the start in a virtual world.
  if (world_epoch_ > 0 && iteration_at_rehearsal_ == t_) {
    terminate(TerminationReason::Unresolved, "rehearsal produced no new information");
    return true;
  }
  iteration_at_rehearsal_ = t_;
  ++world_epoch_;
  world_ = initial_world_;
  history_.clear();
  replan("rehearsal");
  return false;
}

}  // namespace mmrec::reconciler
