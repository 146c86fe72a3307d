// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mmrec/pddl/task.hpp"

namespace mmrec::planner {

/// Which policy a plan instantiates.
enum class PolicyOwner {
  Joint,
  Robot,               // the robot's own policy
  RobotPredictsHuman,  // the robot's prediction of the human
  Human,               // the human's own policy
  HumanPredictsRobot,  // the human's prediction of the robot
};

const char* to_string(PolicyOwner owner);

struct Plan {
  std::vector<pddl::GroundedAction> steps;
  int cost = 0;
  PolicyOwner owner = PolicyOwner::Joint;

  bool empty() const { return steps.empty(); }
  std::size_t size() const { return steps.size(); }
  std::vector<std::string> names() const;

  friend bool operator==(const Plan&, const Plan&) = default;
};

struct AgentPlanPair {
  Plan joint;
  Plan robot_projection;
  Plan human_projection;
};

/// Subsequence of `joint` whose steps belong to `agent`, order preserved.
Plan project_plan(const Plan& joint, std::string_view agent);

AgentPlanPair split_plan(const Plan& joint, std::string_view robot, std::string_view human,
                         PolicyOwner robot_owner, PolicyOwner human_owner);

/// One `step_index agent action(args)` line per step.
std::string serialize_plan(const Plan& plan);

/// Inverse of serialize_plan against `task`; throws std::invalid_argument on
/// malformed lines or unknown actions.
Plan parse_plan(std::string_view text, const pddl::GroundedTask& task);

}  // namespace mmrec::planner
