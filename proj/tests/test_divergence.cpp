// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "mmrec/divergence/divergence.hpp"
#include "mmrec/divergence/levenshtein.hpp"
#include "support/oracles.hpp"

using namespace mmrec;
using namespace mmrec::divergence;

namespace {

std::vector<std::string> random_seq(std::mt19937& rng) {
  static const std::vector<std::string> alphabet = {"move", "cook", "serve", "set_table", "pick_dish"};
  std::uniform_int_distribution<int> len(0, 8), sym(0, static_cast<int>(alphabet.size()) - 1);
  std::vector<std::string> out(static_cast<std::size_t>(len(rng)));
  for (auto& s : out) s = alphabet[static_cast<std::size_t>(sym(rng))];
  return out;
}

planner::Plan plan_of(const std::vector<std::string>& names) {
  planner::Plan p;
  for (const auto& n : names) {
    pddl::GroundedAction a;
    a.name = n;
    p.steps.push_back(a);
  }
  return p;
}

}  // namespace

TEST(Levenshtein, Examples) {
  const std::vector<std::string> abc = {"a", "b", "c"}, ac = {"a", "c"}, none;
  EXPECT_EQ(levenshtein(abc, abc), 0u);
  EXPECT_EQ(levenshtein(abc, ac), 1u);
  EXPECT_EQ(levenshtein(abc, none), 3u);
  EXPECT_EQ(levenshtein(none, ac), 2u);
  EXPECT_EQ(levenshtein(std::string("kitten"), std::string("sitting")), 3u);
}

TEST(Levenshtein, MetricPropertiesAgainstRecursiveDefinition) {
  std::mt19937 rng(42);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_seq(rng), b = random_seq(rng), c = random_seq(rng);
    const auto ab = levenshtein(a, b);
    ASSERT_EQ(ab, oracle::ref_levenshtein(a, b));
    ASSERT_EQ(levenshtein(a, a), 0u);
    ASSERT_EQ(ab, levenshtein(b, a));
    ASSERT_LE(levenshtein(a, c), ab + levenshtein(b, c));
    ASSERT_EQ(ab == 0, a == b);
    ASSERT_LE(ab, std::max(a.size(), b.size()));
  }
}

TEST(PlanDivergence, ComparesActionNames) {
  EXPECT_EQ(plan_divergence(plan_of({"a", "b", "c"}), plan_of({"a", "c"})), 1u);
  EXPECT_EQ(plan_divergence(plan_of({}), plan_of({})), 0u);
  const auto p = plan_of({"x", "y"});
  EXPECT_EQ(plan_divergence(p, p), 0u);
}

TEST(Reconciliation, CompleteBelowEpsilon) {
  DivergenceReport r;
  EXPECT_TRUE(reconciliation_complete(r));
  r.d_rh = 2;
  EXPECT_FALSE(reconciliation_complete(r));
  r.epsilon = 3;
  EXPECT_TRUE(reconciliation_complete(r));
  r.d_hr = 3;
  EXPECT_FALSE(reconciliation_complete(r));
}

TEST(Objective, SumOfBothDirections) {
  DivergenceReport r;
  EXPECT_EQ(objective(r), 0.0);
  r.d_hr = 1;
  r.d_rh = 2;
  EXPECT_EQ(objective(r), 3.0);
}

TEST(Csv, HeaderAndRows) {
  EXPECT_EQ(to_csv({}), std::string(kMetricsHeader) + "\n");
  DivergenceReport r{2, 1, 3, 1.0, 4, 5, 6};
  EXPECT_EQ(to_csv_row(r), "2,1,3,4,5,6");
  std::istringstream in(to_csv({DivergenceReport{}, r}));
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "t,d_hr,d_rh,ed_r_gt,ed_h_gt,ed_r_h");
  EXPECT_EQ(lines[1], "0,0,0,0,0,0");
  EXPECT_EQ(lines[2], "2,1,3,4,5,6");
}
