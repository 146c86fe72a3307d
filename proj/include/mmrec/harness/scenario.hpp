// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mmrec/context/context_model.hpp"
#include "mmrec/pddl/ast.hpp"
#include "mmrec/reconciler/world.hpp"

namespace mmrec::harness {

class ScenarioInvalid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Condition { RobotIncomplete, HumanIncomplete, BothIncomplete, NeitherIncomplete };
const char* to_string(Condition c);
std::optional<Condition> parse_condition(std::string_view s);

inline constexpr const char* kManifestName = "scenario.json";

struct Scenario {
  std::string name;
  std::filesystem::path dir;
  Condition condition = Condition::NeitherIncomplete;
  pddl::Domain domain;
  pddl::Problem problem;
  context::ContextModel ground_truth;
  context::ContextModel robot_facts;
  context::ContextModel human_facts;
  double epsilon = 1.0;
  bool tolerate_reordering = false;
  std::string robot_agent = "robot";
  std::string human_agent = "human";

  /// The physical world: the base problem with every ground-truth fact applied.
  reconciler::World initial_world() const;
};

/// Loads `<path>/scenario.json` (or `path` itself when it names a file) and
/// checks that the fact files are subsets of the ground truth whose union is
/// the ground truth, and that every context compiles.
Scenario load_scenario(const std::filesystem::path& path);

/// Raises ScenarioInvalid with the first violated invariant.
void check_invariants(const Scenario& s);

}  // namespace mmrec::harness
