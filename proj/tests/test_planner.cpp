// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "mmrec/context/compiler.hpp"
#include "mmrec/pddl/parser.hpp"
#include "mmrec/planner/plan.hpp"
#include "mmrec/planner/search.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace mmrec;
using namespace mmrec::planner;
using pddl::GroundedTask;

namespace {

constexpr const char* kChain = R"((define (domain chain) (:types agent)
  (:predicates (p) (q) (g))
  (:action a1 :parameters (?a - agent) :precondition (p) :effect (q))
  (:action a2 :parameters (?a - agent) :precondition (q) :effect (g))))";

GroundedTask chain_task(const std::string& init, const std::string& goal) {
  const auto d = pddl::parse_domain(kChain);
  const auto p = pddl::parse_problem("(define (problem c) (:domain chain) (:objects r - agent) (:init " + init +
                                         ") (:goal " + goal + "))",
                                     d);
  return pddl::ground_task(d, p);
}

std::optional<int> oracle_cost(const pddl::Domain& d, const pddl::Problem& p,
                               const std::vector<context::Fact>& facts = {}) {
  std::set<std::pair<std::string, std::string>> forbidden;
  for (const auto& f : facts) {
    if (f.category == context::Category::Capability && !f.positive()) forbidden.emplace(f.subject, f.relation);
  }
  std::set<std::string> init, goal;
  for (const auto& a : p.init) init.insert(oracle::ref_atom(a.predicate, a.args));
  for (const auto& a : p.goal) goal.insert(oracle::ref_atom(a.predicate, a.args));
  return oracle::bfs_cost(oracle::brute_ground(d, p, forbidden), init, goal);
}

}  // namespace

TEST(FindPlan, GoalAlreadyHoldsGivesEmptyPlan) {
  const auto t = chain_task("(p) (g)", "(g)");
  const auto plan = find_plan(t, t.init);
  ASSERT_TRUE(plan);
  EXPECT_TRUE(plan->empty());
  EXPECT_EQ(plan->cost, 0);
}

TEST(FindPlan, SingleActionAchievingGoal) {
  const auto t = chain_task("(q)", "(g)");
  const auto plan = find_plan(t, t.init);
  ASSERT_TRUE(plan);
  EXPECT_EQ(plan->names(), (std::vector<std::string>{"a2(r)"}));
}

TEST(FindPlan, UnsolvableReturnsNullopt) {
  const auto t = chain_task("", "(g)");
  EXPECT_FALSE(find_plan(t, t.init));
  EXPECT_FALSE(optimal_plan_bfs(t, t.init));
}

TEST(FindPlan, NodeLimitRaisesResourceLimit) {
  const auto& d = oracle::dinner_domain();
  const auto t = pddl::ground_task(d, oracle::dinner_problem());
  SearchLimits limits;
  limits.max_nodes = 2;
  EXPECT_THROW(find_plan(t, t.init, limits), ResourceLimitError);
}

TEST(Bfs, TwoActionChain) {
  const auto t = chain_task("(p)", "(g)");
  const auto plan = optimal_plan_bfs(t, t.init);
  ASSERT_TRUE(plan);
  EXPECT_EQ(plan->names(), (std::vector<std::string>{"a1(r)", "a2(r)"}));
  EXPECT_EQ(optimal_plan_bfs(t, t.make_state(std::vector<std::string>{"(g)"}))->size(), 0u);
}

TEST(Heuristics, ZeroAtGoalAndAdmissibleOrdering) {
  const auto t = chain_task("(p)", "(g)");
  EXPECT_EQ(h_add(t, t.init), 2);
  EXPECT_EQ(h_max(t, t.init), 2);
  const auto at_goal = t.make_state(std::vector<std::string>{"(g)"});
  EXPECT_EQ(h_add(t, at_goal), 0);
  EXPECT_EQ(h_max(t, at_goal), 0);
}

TEST(FindPlan, RandomTasksMatchBreadthFirstOptimum) {
  std::mt19937 rng(2026);
  int solvable = 0;
  for (int i = 0; i < 200; ++i) {
    const auto rt = oracle::random_task(rng);
    const auto d = pddl::parse_domain(rt.domain);
    const auto p = pddl::parse_problem(rt.problem, d);
    const auto t = pddl::ground_task(d, p);
    const auto astar = find_plan(t, t.init);
    const auto bfs = optimal_plan_bfs(t, t.init);
    const auto ref = oracle_cost(d, p);
    ASSERT_EQ(astar.has_value(), ref.has_value()) << rt.domain << rt.problem;
    ASSERT_EQ(bfs.has_value(), ref.has_value());
    if (!ref) continue;
    ++solvable;
    EXPECT_EQ(astar->cost, *ref) << rt.domain << rt.problem;
    EXPECT_EQ(bfs->cost, *ref);
    EXPECT_TRUE(validate_plan(t, t.init, *astar).valid);
    EXPECT_TRUE(validate_plan(t, t.init, *bfs).valid);
  }
  EXPECT_GE(solvable, 50);
}

TEST(FindPlan, DinnerContextsMatchOracle) {
  const std::vector<context::Fact> pool = {oracle::vegetarian_alice(), oracle::alice_wants_veg(),
                                           oracle::human_cannot_load(), oracle::no_steak()};
  for (unsigned mask = 0; mask < (1u << pool.size()); ++mask) {
    std::vector<context::Fact> fs;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (mask & (1u << i)) fs.push_back(pool[i]);
    }
    const auto m = context::compile_context(oracle::dinner_domain(), oracle::dinner_problem(),
                                            context::ContextModel(context::Owner::Robot, fs));
    const auto astar = find_plan(m.task, m.task.init);
    const auto ref = oracle_cost(m.domain, m.problem, fs);
    ASSERT_EQ(astar.has_value(), ref.has_value()) << "mask " << mask;
    if (ref) {
      EXPECT_EQ(astar->cost, *ref) << "mask " << mask;
      EXPECT_TRUE(validate_plan(m.task, m.task.init, *astar).valid);
    }
  }
}

TEST(FindPlan, DinnerFullTaskIsOptimal) {
  const auto t = pddl::ground_task(oracle::dinner_domain(), oracle::dinner_problem());
  const auto plan = find_plan(t, t.init);
  const auto bfs = optimal_plan_bfs(t, t.init);
  ASSERT_TRUE(plan);
  ASSERT_TRUE(bfs);
  EXPECT_EQ(plan->cost, bfs->cost);
  EXPECT_EQ(plan->cost, 10);
}

TEST(FindPlan, Deterministic) {
  const auto t = pddl::ground_task(oracle::dinner_domain(), oracle::dinner_problem());
  EXPECT_EQ(find_plan(t, t.init)->names(), find_plan(t, t.init)->names());
}

TEST(Validate, EmptyPlanWithSatisfiedGoal) {
  const auto t = chain_task("(g)", "(g)");
  EXPECT_TRUE(validate_plan(t, t.init, Plan{}).valid);
}

TEST(Validate, OutOfOrderStepsReportFirstBadIndex) {
  const auto t = chain_task("(p)", "(g)");
  Plan plan;
  plan.steps = {*t.find_action("a2(r)"), *t.find_action("a1(r)")};
  const auto v = validate_plan(t, t.init, plan);
  EXPECT_FALSE(v.valid);
  EXPECT_EQ(v.step_index, 0u);
}

TEST(Validate, GoalUnmetAfterPlanIsInvalid) {
  const auto t = chain_task("(p)", "(g)");
  Plan plan;
  plan.steps = {*t.find_action("a1(r)")};
  EXPECT_FALSE(validate_plan(t, t.init, plan).valid);
}

TEST(Project, AllRobotPlanProjectsToEmptyHumanPlan) {
  const auto t = chain_task("(p)", "(g)");
  const auto plan = find_plan(t, t.init);
  EXPECT_TRUE(project_plan(*plan, "human").empty());
  EXPECT_EQ(project_plan(*plan, "r").size(), 2u);
}

TEST(Project, ProjectionsPartitionTheJointPlan) {
  const auto t = pddl::ground_task(oracle::dinner_domain(), oracle::dinner_problem());
  const auto joint = *find_plan(t, t.init);
  const auto pair = split_plan(joint, "robot", "human", PolicyOwner::Robot, PolicyOwner::RobotPredictsHuman);
  EXPECT_EQ(pair.robot_projection.owner, PolicyOwner::Robot);
  EXPECT_EQ(pair.human_projection.owner, PolicyOwner::RobotPredictsHuman);
  std::multiset<std::string> parts, whole;
  for (const auto& s : pair.robot_projection.steps) parts.insert(s.name);
  for (const auto& s : pair.human_projection.steps) parts.insert(s.name);
  for (const auto& s : joint.steps) whole.insert(s.name);
  EXPECT_EQ(parts, whole);
}

TEST(Project, DinnerHumanProjectionSetsTheTable) {
  const auto t = pddl::ground_task(oracle::dinner_domain(), oracle::dinner_problem());
  const auto human = project_plan(*find_plan(t, t.init), "human");
  const auto names = human.names();
  EXPECT_TRUE(std::any_of(names.begin(), names.end(), [](const std::string& n) { return n.rfind("set_table", 0) == 0; }));
}

TEST(PlanText, SerializeParseRoundTrip) {
  const auto t = pddl::ground_task(oracle::dinner_domain(), oracle::dinner_problem());
  const auto plan = *find_plan(t, t.init);
  const auto back = parse_plan(serialize_plan(plan), t);
  EXPECT_EQ(back.names(), plan.names());
  EXPECT_EQ(back.cost, plan.cost);
  EXPECT_THROW(parse_plan("0 robot fly(robot)\n", t), std::invalid_argument);
}

TEST(FindPlan, EveryOutputValidFromRandomStarts) {
  const auto t = pddl::ground_task(oracle::dinner_domain(), oracle::dinner_problem());
  std::mt19937 rng(5);
  auto state = t.init;
  for (int step = 0; step < 30; ++step) {
    std::vector<const pddl::GroundedAction*> app;
    for (const auto& a : t.actions) {
      if (pddl::applicable(state, a)) app.push_back(&a);
    }
    if (app.empty()) break;
    state = pddl::apply_action(state, *app[std::uniform_int_distribution<std::size_t>(0, app.size() - 1)(rng)]);
    if (const auto plan = find_plan(t, state)) {
      EXPECT_TRUE(validate_plan(t, state, *plan).valid);
    }
  }
}
