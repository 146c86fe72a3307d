// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>

#include "mmrec/context/compiler.hpp"
#include "mmrec/harness/scenario.hpp"
#include "mmrec/nlu/grammar.hpp"
#include "mmrec/pddl/error.hpp"
#include "mmrec/pddl/parser.hpp"
#include "mmrec/reconciler/relevance.hpp"
#include "mmrec/reconciler/session.hpp"
#include "support/fixtures.hpp"

using namespace mmrec;
using namespace mmrec::reconciler;
using context::Category;
using context::ContextModel;
using context::Fact;
using context::Polarity;

namespace {

constexpr const char* kChores = R"(
(define (domain chores)
  (:requirements :strips :typing)
  (:types agent item - object)
  (:predicates (dusty) (clean) (tidy) (in_stock ?i - item) (have ?i - item) (washed))
  (:action dust :parameters (?a - agent) :precondition (dusty) :effect (and (clean) (not (dusty))))
  (:action tidy_up :parameters (?a - agent) :effect (tidy))
  (:action buy :parameters (?a - agent ?i - item) :precondition (in_stock ?i) :effect (have ?i))
  (:action wash :parameters (?a - agent ?i - item) :precondition (have ?i) :effect (washed)))
)";

const pddl::Domain& chores() {
  static const pddl::Domain d = pddl::parse_domain(kChores);
  return d;
}

pddl::Problem chores_problem(const std::string& goal) {
  return pddl::parse_problem(
      "(define (problem p) (:domain chores) (:objects robot human - agent gel soap - item)"
      " (:init (dusty) (in_stock gel) (in_stock soap)) (:goal (and " + goal + ")))",
      chores());
}

Fact cannot(const std::string& agent, const std::string& schema) {
  return oracle::make_fact(Category::Capability, agent, schema, {}, Polarity::Negative);
}

nlu::Utterance say(const std::string& text) { return {nlu::Speaker::Human, text, 0}; }

Session scenario_session(const std::string& name, bool tolerate = false) {
  const auto s = harness::load_scenario(oracle::scenario_path(name));
  SessionConfig cfg;
  cfg.epsilon = s.epsilon;
  cfg.tolerate_reordering = tolerate;
  cfg.label = s.name;
  Session session(SessionInputs{s.domain, s.problem, s.robot_facts, s.initial_world()}, cfg);
  session.start();
  return session;
}

std::size_t count_kind(const Session& s, const std::string& kind) {
  const auto& ev = s.events();
  return static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [&](const Event& e) { return e.kind == kind; }));
}

const Event* last_of(const Session& s, const std::string& kind) {
  const auto& ev = s.events();
  for (auto it = ev.rbegin(); it != ev.rend(); ++it) {
    if (it->kind == kind) return &*it;
  }
  return nullptr;
}

ActionAtoms act(const std::string& name, const std::string& agent, std::vector<std::string> pre,
                std::vector<std::string> add, std::vector<std::string> args = {}) {
  const auto schema = name.substr(0, name.find('('));
  return ActionAtoms{name, schema, agent, std::move(args), std::move(pre), std::move(add), {}};
}

}  // namespace

TEST(SessionStart, NeitherIncompletePlansAndSnapshotsMetrics) {
  auto s = scenario_session("dinner-neither-incomplete");
  EXPECT_EQ(s.phase(), Phase::Executing);
  EXPECT_EQ(s.iteration(), 0);
  EXPECT_FALSE(s.plans().joint.empty());
  EXPECT_FALSE(s.plans().human_projection.empty());
  EXPECT_EQ(s.metrics().size(), 1u);
  EXPECT_EQ(s.events()[0].kind, "plan");
  EXPECT_EQ(s.tick(), s.events().size());
  EXPECT_THROW(s.start(), std::logic_error);
}

TEST(SessionStart, TicksNumberEventsFromOne) {
  auto s = scenario_session("dinner-both-incomplete");
  for (std::size_t i = 0; i < s.events().size(); ++i) EXPECT_EQ(s.events()[i].tick, i + 1);
  EXPECT_EQ(s.events_since(s.tick()).size(), 0u);
  EXPECT_EQ(s.events_since(1).size(), s.events().size() - 1);
}

TEST(Robot, WaitsForEarlierHumanStepThenActs) {
  auto s = scenario_session("dinner-neither-incomplete");
  ASSERT_EQ(s.expected_human_step()->name, "pick_dish(human,tofu_curry)");
  const auto waited = s.robot_step();
  EXPECT_TRUE(waited.waited);
  EXPECT_FALSE(waited.executed);
  const auto obs = s.observe_human_action("pick_dish(human,tofu_curry)");
  EXPECT_TRUE(obs.applied);
  EXPECT_FALSE(obs.violation);
  EXPECT_EQ(s.expected_human_step()->name, "set_table(human)");
  const auto acted = s.robot_step();
  ASSERT_TRUE(acted.executed);
  EXPECT_EQ(acted.executed->name, "cook(robot,tofu_curry)");
  EXPECT_TRUE(s.world().holds("(cooked tofu_curry)"));
}

TEST(Observe, DeviationOpensClarification) {
  auto s = scenario_session("dinner-neither-incomplete");
  const auto obs = s.observe_human_action("move(human,dining,kitchen)");
  ASSERT_TRUE(obs.violation);
  EXPECT_EQ(obs.violation->expected.name, "pick_dish(human,tofu_curry)");
  EXPECT_EQ(obs.violation->observed.name, "move(human,dining,kitchen)");
  EXPECT_EQ(obs.violation->step_index, 0u);
  ASSERT_TRUE(obs.interruption);
  EXPECT_NE(obs.interruption->text.find("pick_dish(human,tofu_curry)"), std::string::npos);
  EXPECT_NE(obs.interruption->text.find("move(human,dining,kitchen)"), std::string::npos);
  EXPECT_EQ(s.phase(), Phase::AwaitingClarification);
  EXPECT_EQ(s.violation_count(), 1u);
  EXPECT_THROW(s.robot_step(), PhaseError);
  EXPECT_THROW(s.observe_human_action("set_table(human)"), PhaseError);
  EXPECT_THROW(s.confirm_restatement(say("x")), PhaseError);
}

TEST(Observe, UnknownActionRejected) {
  auto s = scenario_session("dinner-neither-incomplete");
  EXPECT_THROW(s.observe_human_action("fly(human)"), UnknownActionError);
  EXPECT_THROW(s.observe_human_action("cook(robot,tofu_curry)"), UnknownActionError);
}

TEST(Observe, ReorderingToleratedOnlyWhenEnabled) {
  auto strict = scenario_session("dinner-neither-incomplete", false);
  EXPECT_TRUE(strict.observe_human_action("set_table(human)").violation);
  auto lenient = scenario_session("dinner-neither-incomplete", true);
  const auto r = lenient.observe_human_action("set_table(human)");
  EXPECT_FALSE(r.violation);
  EXPECT_EQ(lenient.phase(), Phase::Executing);
  EXPECT_EQ(lenient.expected_human_step()->name, "pick_dish(human,tofu_curry)");
}

TEST(Observe, IdlingWhenExpectedStepIsReadyIsAViolation) {
  auto s = scenario_session("dinner-neither-incomplete");
  const auto r = s.observe_human_action(idle_action("human"));
  ASSERT_TRUE(r.violation);
  EXPECT_EQ(r.violation->observed.name, "none");
  EXPECT_EQ(s.phase(), Phase::AwaitingClarification);
}

TEST(Observe, IdlingWhileWaitingOnRobotIsFine) {
  auto s = scenario_session("dinner-neither-incomplete");
  s.observe_human_action("pick_dish(human,tofu_curry)");
  s.observe_human_action("set_table(human)");
  // serve_veg needs the robot to cook first
  EXPECT_FALSE(s.observe_human_action(idle_action("human")).violation);
}

TEST(Interruption, TemplateNamesBothActionsAndIsDeterministic) {
  Violation v{act("set_table(human)", "human", {}, {}), act("cook(human,steak)", "human", {}, {}), 0, false};
  const auto a = Session::make_interruption(v), b = Session::make_interruption(v);
  EXPECT_EQ(a.text, b.text);
  EXPECT_EQ(a.text, "I expected you to set_table(human) but I observed cook(human,steak). Can you tell me why?");
  EXPECT_EQ(a.speaker, nlu::Speaker::Robot);
}

TEST(Utterance, NoNewInformationWhileExecutingChangesNothing) {
  auto s = scenario_session("dinner-both-incomplete");
  const auto ctx = s.robot_ctx();
  const auto plan = s.plans().joint.names();
  const auto t = s.iteration();
  const auto r = s.handle_human_utterance(say("ok sounds good"));
  EXPECT_FALSE(r.model_changed);
  EXPECT_EQ(r.extraction.attribution, nlu::Attribution::NoNewInformation);
  EXPECT_EQ(s.robot_ctx(), ctx);
  EXPECT_EQ(s.plans().joint.names(), plan);
  EXPECT_EQ(s.iteration(), t);
  EXPECT_EQ(s.phase(), Phase::Executing);
  EXPECT_EQ(s.transcript().size(), 2u);
  EXPECT_EQ(s.explanations().size(), 0u);
}

TEST(Utterance, RobotMissingFactUpdatesModelAndReplans) {
  auto s = scenario_session("dinner-both-incomplete");
  const auto before = s.robot_ctx().size();
  const auto r = s.handle_human_utterance(say("fact: init alice vegetarian + missing-from: robot"));
  EXPECT_TRUE(r.model_changed);
  EXPECT_EQ(s.robot_ctx().size(), before + 1);
  EXPECT_EQ(s.explanations().m(), 1u);
  EXPECT_EQ(s.explanations().n(), 0u);
  EXPECT_EQ(s.iteration(), 1);
  EXPECT_EQ(s.metrics().size(), 2u);
  ASSERT_TRUE(r.explanation);
  EXPECT_EQ(r.explanation->direction, Direction::HumanToRobot);
  EXPECT_EQ(r.reply.text, "Thank you, I did not know that. It is the case that vegetarian(alice). I have updated my plan.");
  ASSERT_NE(last_of(s, "replan"), nullptr);
  EXPECT_EQ(last_of(s, "replan")->payload["reason"], "model_update");
}

TEST(Utterance, CompileConflictIsNotUnderstood) {
  auto s = scenario_session("dinner-neither-incomplete");
  const auto r = s.handle_human_utterance(say("fact: init alice vegetarian - missing-from: robot"));
  EXPECT_FALSE(r.understood);
  EXPECT_FALSE(r.model_changed);
  EXPECT_EQ(s.iteration(), 0);
}

TEST(Utterance, OutOfVocabularyIsNotUnderstood) {
  auto s = scenario_session("dinner-neither-incomplete");
  const auto r = s.handle_human_utterance(say("fact: init alice flies + missing-from: robot"));
  EXPECT_FALSE(r.understood);
  EXPECT_EQ(r.reply.text, "I did not understand that. Could you rephrase?");
}

TEST(Dialogue, ReasksOnceThenGivesUpAndSuppresses) {
  auto s = scenario_session("dinner-neither-incomplete");
  s.observe_human_action("move(human,dining,kitchen)");
  const auto first = s.handle_human_utterance(say("hmm"));
  EXPECT_EQ(first.reply.text, "I still do not see why. Is there something I do not know?");
  EXPECT_EQ(s.phase(), Phase::AwaitingClarification);
  const auto second = s.handle_human_utterance(say("no idea"));
  EXPECT_EQ(second.reply.text, "Let us move on for now.");
  EXPECT_EQ(s.phase(), Phase::Executing);
  EXPECT_EQ(last_of(s, "replan")->payload["reason"], "dialogue_closed");
  EXPECT_EQ(s.explanations().size(), 0u);
}

TEST(Dialogue, QuestionAnsweredFromRobotContextAwaitsRestatement) {
  auto s = scenario_session("dinner-human-incomplete");
  const auto r = s.handle_human_utterance(say("why: serve(human,carol,tofu_curry) instead-of: none"));
  ASSERT_TRUE(r.explanation);
  EXPECT_EQ(r.explanation->direction, Direction::RobotToHuman);
  EXPECT_EQ(s.phase(), Phase::AwaitingRestatement);
  ASSERT_TRUE(s.pending_explanation());
  for (const auto& f : r.explanation->facts) EXPECT_TRUE(s.robot_ctx().contains(f.key())) << f.key().value;
  const auto& fs = r.explanation->facts;
  EXPECT_TRUE(std::any_of(fs.begin(), fs.end(), [](const Fact& f) { return f.subject == "carol"; }));
  EXPECT_EQ(r.reply.text.rfind("Let me explain.", 0), 0u);
  EXPECT_THROW(s.handle_human_utterance(say("ok")), PhaseError);
  EXPECT_THROW(s.robot_step(), PhaseError);
}

TEST(Restatement, EchoMatchesAndRecordsKnowledge) {
  auto s = scenario_session("dinner-human-incomplete");
  const auto r = s.handle_human_utterance(say("why: serve(human,carol,tofu_curry) instead-of: none"));
  const auto facts = r.explanation->facts;
  const auto m = s.confirm_restatement(say(nlu::render_facts_utterance(facts, nlu::Attribution::MissingFromHuman)));
  EXPECT_TRUE(m.matched);
  EXPECT_EQ(s.phase(), Phase::Executing);
  EXPECT_EQ(s.explanations().n(), 1u);
  EXPECT_EQ(s.told_to_human().size(), facts.size());
  EXPECT_EQ(s.iteration(), 1);
  EXPECT_FALSE(s.pending_explanation());
}

TEST(Restatement, ThirdMissIsUnresolved) {
  auto s = scenario_session("dinner-human-incomplete");
  const auto r = s.handle_human_utterance(say("why: serve(human,carol,tofu_curry) instead-of: none"));
  const auto text = r.explanation->text;
  for (int i = 0; i < 2; ++i) {
    const auto miss = s.confirm_restatement(say(""));
    EXPECT_FALSE(miss.matched);
    EXPECT_FALSE(miss.unresolved);
    EXPECT_EQ(miss.missing.size(), r.explanation->facts.size());
    EXPECT_EQ(miss.reply->text, text);
    EXPECT_EQ(s.phase(), Phase::AwaitingRestatement);
  }
  const auto last = s.confirm_restatement(say(""));
  EXPECT_TRUE(last.unresolved);
  EXPECT_EQ(s.phase(), Phase::Executing);
  EXPECT_EQ(s.explanations().n(), 0u);
  EXPECT_TRUE(s.told_to_human().empty());
  EXPECT_EQ(last_of(s, "explanation")->payload["status"], "unresolved");
}

TEST(Restatement, ReexplanationLimitIsConfigurable) {
  const auto sc = harness::load_scenario(oracle::scenario_path("dinner-human-incomplete"));
  SessionConfig cfg;
  cfg.max_reexplanations = 0;
  Session s(SessionInputs{sc.domain, sc.problem, sc.robot_facts, sc.initial_world()}, cfg);
  s.start();
  s.handle_human_utterance(say("why: serve(human,carol,tofu_curry) instead-of: none"));
  EXPECT_TRUE(s.confirm_restatement(say("")).unresolved);
}

TEST(Scripted, HelpfulUnexpectedHumanActionLeadsToReplan) {
  SessionConfig cfg;
  Session s(SessionInputs{chores(), chores_problem("(clean) (tidy)"),
                          ContextModel(context::Owner::Robot, std::vector<Fact>{cannot("human", "dust")}),
                          World(chores(), {"(dusty)", "(in_stock gel)", "(in_stock soap)"})},
            cfg);
  s.start();
  ASSERT_EQ(s.next_robot_step()->name, "dust(robot)");
  ASSERT_EQ(s.expected_human_step()->name, "tidy_up(human)");

  // The human dusts, which the robot believed it had to do itself.
  const auto obs = s.observe_human_action(act("dust(human)", "human", {"(dusty)"}, {"(clean)"}));
  EXPECT_TRUE(obs.applied);
  ASSERT_TRUE(obs.violation);
  EXPECT_EQ(s.phase(), Phase::AwaitingClarification);
  EXPECT_TRUE(s.world().holds("(clean)"));

  const auto r = s.handle_human_utterance(say("fact: capability human dust + missing-from: robot"));
  EXPECT_TRUE(r.model_changed);
  EXPECT_EQ(s.phase(), Phase::Executing);
  const auto* rp = last_of(s, "replan");
  ASSERT_NE(rp, nullptr);
  EXPECT_EQ(rp->payload["reason"], "dialogue_closed");
  EXPECT_EQ(s.plans().joint.names(), (std::vector<std::string>{"tidy_up(human)"}));
  EXPECT_FALSE(s.next_robot_step());
  EXPECT_FALSE(s.observe_human_action("tidy_up(human)").violation);
  EXPECT_FALSE(s.robot_step().notice);
}

TEST(Scripted, PreconditionFailureReplansThenAsks) {
  SessionConfig cfg;
  const auto problem = chores_problem("(washed)");
  const ContextModel ctx(context::Owner::Robot, std::vector<Fact>{cannot("human", "buy"), cannot("human", "wash")});
  // Find which item the robot will reach for, then take it off the shelf.
  const auto probe_model = context::compile_context(chores(), problem, ctx);
  Session probe(SessionInputs{chores(), problem, ctx, World(chores(), {"(in_stock gel)", "(in_stock soap)"})}, cfg);
  probe.start();
  const auto first = *probe.next_robot_step();
  ASSERT_EQ(first.schema, "buy");
  const std::string item = first.args.back();
  const std::string other = item == "gel" ? "soap" : "gel";

  Session s(SessionInputs{chores(), problem, ctx, World(chores(), {"(in_stock " + other + ")"})}, cfg);
  s.start();
  const auto r = s.robot_step();
  EXPECT_FALSE(r.executed);
  ASSERT_TRUE(r.notice);
  EXPECT_EQ(r.notice->text, "I tried to " + first.name + " but I could not. Can you tell me why?");
  EXPECT_EQ(count_kind(s, "replan"), 1u);
  EXPECT_EQ(last_of(s, "replan")->payload["reason"], "precondition_failed");
  EXPECT_EQ(s.phase(), Phase::AwaitingClarification);

  const auto u = s.handle_human_utterance(say("fact: init " + item + " in_stock - missing-from: robot"));
  EXPECT_TRUE(u.model_changed);
  EXPECT_EQ(s.phase(), Phase::Executing);
  const auto next = s.robot_step();
  ASSERT_TRUE(next.executed);
  EXPECT_EQ(next.executed->name, "buy(robot," + other + ")");
  (void)probe_model;
}

TEST(Scripted, UnresolvedPairIsNotRaisedAgain) {
  SessionConfig cfg;
  Session s(SessionInputs{chores(), chores_problem("(clean) (tidy)"),
                          ContextModel(context::Owner::Robot, std::vector<Fact>{cannot("human", "dust")}),
                          World(chores(), {"(dusty)", "(in_stock gel)", "(in_stock soap)"})},
            cfg);
  s.start();
  const auto buy = act("buy(human,gel)", "human", {"(in_stock gel)"}, {"(have gel)"}, {"gel"});
  ASSERT_TRUE(s.observe_human_action(buy).violation);
  s.handle_human_utterance(say("nothing"));
  s.handle_human_utterance(say("nothing"));
  ASSERT_EQ(s.phase(), Phase::Executing);
  const auto again = s.observe_human_action(buy);
  EXPECT_FALSE(again.violation);
  EXPECT_FALSE(again.interruption);
  EXPECT_EQ(s.phase(), Phase::Executing);
  EXPECT_EQ(last_of(s, "violation")->payload["suppressed"], true);
  EXPECT_EQ(s.violation_count(), 1u);
}

TEST(Stall, SecondStallOpensDialogue) {
  auto s = scenario_session("dinner-neither-incomplete");
  s.notify_stall();
  EXPECT_EQ(s.phase(), Phase::Executing);
  s.notify_stall();
  EXPECT_EQ(s.phase(), Phase::AwaitingClarification);
}

TEST(Terminate, BlocksEverything) {
  auto s = scenario_session("dinner-neither-incomplete");
  s.terminate(TerminationReason::Error, "test");
  EXPECT_EQ(s.phase(), Phase::Terminated);
  EXPECT_TRUE(s.check_termination());
  EXPECT_THROW(s.robot_step(), PhaseError);
  EXPECT_THROW(s.handle_human_utterance(say("hi")), PhaseError);
  EXPECT_THROW(s.observe_human_action("set_table(human)"), PhaseError);
  EXPECT_EQ(s.events().back().kind, "terminated");
}

TEST(Termination, InitialBothIncompleteStateDoesNotTerminate) {
  auto s = scenario_session("dinner-both-incomplete");
  EXPECT_FALSE(s.check_termination());
  EXPECT_EQ(s.phase(), Phase::Executing);
}

TEST(Relevance, CausalChainFollowsForwardConsumers) {
  const std::vector<ActionAtoms> trace = {
      act("pick(a)", "h", {}, {"(chosen)"}),
      act("unrelated(a)", "r", {}, {"(x)"}),
      act("cook(a)", "r", {"(chosen)"}, {"(cooked)"}),
      act("serve(a)", "h", {"(cooked)"}, {"(served)"}),
  };
  const auto chain = causal_chain(trace, "pick(a)");
  std::vector<std::string> names;
  for (const auto& a : chain) names.push_back(a.name);
  EXPECT_EQ(names, (std::vector<std::string>{"pick(a)", "cook(a)", "serve(a)"}));
  EXPECT_TRUE(causal_chain(trace, "missing(a)").empty());
}

TEST(Relevance, SelectsAndRanksFacts) {
  auto serve_veg = act("serve_veg(human,alice,tofu)", "human", {"(vegetarian alice)", "(cooked tofu)"},
                       {"(served alice)", "(served_veg alice)"}, {"alice", "tofu"});
  const std::vector<ActionAtoms> trace = {serve_veg};
  const auto foil = act("serve(human,alice,steak)", "human", {"(has_ingredients steak)"}, {}, {"alice", "steak"});
  const std::vector<Fact> candidates = {
      oracle::make_fact(Category::Object, "alice", "guest"),
      oracle::vegetarian_alice(),
      oracle::alice_wants_veg(),
      oracle::no_steak(),
      cannot("human", "serve"),
      oracle::make_fact(Category::Init, "bob", "vegetarian"),
  };
  const auto out = select_relevant(candidates, trace, "serve_veg(human,alice,tofu)", foil);
  std::vector<std::string> keys;
  for (const auto& f : out) keys.push_back(f.key().value);
  EXPECT_EQ(keys, (std::vector<std::string>{"capability|human|serve||-", "preference|alice|served_veg||+",
                                            "init|alice|vegetarian||+", "init|steak|has_ingredients||-",
                                            "object|alice|guest||+"}));
  EXPECT_TRUE(select_relevant(candidates, trace, "nothing", std::nullopt).empty());
}

TEST(ExplanationLogCounts, SplitsByDirection) {
  ExplanationLog log;
  log.append({Direction::RobotToHuman, {}, "a", 1});
  log.append({Direction::HumanToRobot, {}, "b", 1});
  log.append({Direction::HumanToRobot, {}, "c", 2});
  EXPECT_EQ(log.n(), 1u);
  EXPECT_EQ(log.m(), 2u);
  EXPECT_EQ(log.size(), 3u);
}

TEST(EventJson, OneLinePerEventWithSortedKeys) {
  const Event e{3, "robot_action", {{"action", "cook(robot,steak)"}}};
  EXPECT_EQ(to_json_line(e), R"j({"kind":"robot_action","payload":{"action":"cook(robot,steak)"},"tick":3})j");
  EXPECT_EQ(to_json_lines({e, e}), to_json_line(e) + "\n" + to_json_line(e) + "\n");
}

TEST(WorldModel, AppliesAndChecksAtoms) {
  World w(chores(), {"(dusty)"});
  const auto dust = act("dust(robot)", "robot", {"(dusty)"}, {"(clean)"});
  EXPECT_TRUE(w.applicable(dust));
  EXPECT_TRUE(w.is_fluent("(clean)"));
  EXPECT_FALSE(w.is_fluent("(in_stock gel)"));
  w.apply(dust);
  EXPECT_TRUE(w.satisfies({"(clean)"}));
  EXPECT_THROW(w.apply(act("wash(robot,gel)", "robot", {"(have gel)"}, {"(washed)"})), pddl::PddlError);
  EXPECT_TRUE(w.applicable(idle_action("robot")));
}
