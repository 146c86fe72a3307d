// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "mmrec/context/fact.hpp"
#include "mmrec/pddl/parser.hpp"

namespace mmrec::oracle {

inline std::filesystem::path scenario_dir() { return MMREC_SCENARIO_DIR; }

inline std::filesystem::path scenario_path(const std::string& name) { return scenario_dir() / name; }

inline const pddl::Domain& dinner_domain() {
  static const pddl::Domain d = pddl::parse_domain(pddl::read_file(scenario_dir() / "domain" / "dinner.pddl"));
  return d;
}

inline const pddl::Problem& dinner_problem() {
  static const pddl::Problem p =
      pddl::parse_problem(pddl::read_file(scenario_dir() / "domain" / "dinner-base.pddl"), dinner_domain());
  return p;
}

inline context::Fact make_fact(context::Category c, std::string subject, std::string relation,
                               std::vector<std::string> args = {},
                               context::Polarity p = context::Polarity::Positive, std::string gloss = "") {
  context::Fact f;
  f.category = c;
  f.subject = std::move(subject);
  f.relation = std::move(relation);
  f.args = std::move(args);
  f.polarity = p;
  f.gloss = std::move(gloss);
  return context::canonical(std::move(f));
}

inline context::Fact vegetarian_alice() {
  return make_fact(context::Category::Init, "alice", "vegetarian", {}, context::Polarity::Positive,
                   "Alice is vegetarian.");
}

inline context::Fact alice_wants_veg() {
  return make_fact(context::Category::Preference, "alice", "served_veg", {}, context::Polarity::Positive,
                   "Alice wants to be served a vegetarian dish.");
}

inline context::Fact human_cannot_load() {
  return make_fact(context::Category::Capability, "human", "load_dishwasher", {}, context::Polarity::Negative,
                   "The human cannot load the dishwasher.");
}

inline context::Fact no_steak() {
  return make_fact(context::Category::Init, "steak", "has_ingredients", {}, context::Polarity::Negative,
                   "We are out of steak.");
}

}  // namespace mmrec::oracle
