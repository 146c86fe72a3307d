// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/planner/plan.hpp"

#include <sstream>
#include <stdexcept>

namespace mmrec::planner {

const char* to_string(PolicyOwner owner) {
  switch (owner) {
    case PolicyOwner::Joint: return "joint";
    case PolicyOwner::Robot: return "robot";
    case PolicyOwner::RobotPredictsHuman: return "robot-predicts-human";
    case PolicyOwner::Human: return "human";
    case PolicyOwner::HumanPredictsRobot: return "human-predicts-robot";
  }
  return "unknown";
}

std::vector<std::string> Plan::names() const {
  std::vector<std::string> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.name);
  return out;
}

Plan project_plan(const Plan& joint, std::string_view agent) {
  Plan out;
  out.owner = joint.owner;
  for (const auto& s : joint.steps) {
    if (s.agent != agent) continue;
    out.steps.push_back(s);
    out.cost += s.cost;
  }
  return out;
}

AgentPlanPair split_plan(const Plan& joint, std::string_view robot, std::string_view human,
                         PolicyOwner robot_owner, PolicyOwner human_owner) {
  AgentPlanPair pair;
  pair.joint = joint;
  pair.robot_projection = project_plan(joint, robot);
  pair.robot_projection.owner = robot_owner;
  pair.human_projection = project_plan(joint, human);
  pair.human_projection.owner = human_owner;
  return pair;
}

std::string serialize_plan(const Plan& plan) {
  std::ostringstream out;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    out << i << ' ' << plan.steps[i].agent << ' ' << plan.steps[i].name << '\n';
  }
  return out.str();
}

Plan parse_plan(std::string_view text, const pddl::GroundedTask& task) {
  Plan plan;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    std::size_t index = 0;
    std::string agent, name;
    if (!(row >> index >> agent >> name)) throw std::invalid_argument("malformed plan line: " + line);
    if (index != expected) throw std::invalid_argument("plan step index out of sequence: " + line);
    const pddl::GroundedAction* a = task.find_action(name);
    if (a == nullptr) throw std::invalid_argument("unknown action " + name);
    if (a->agent != agent) throw std::invalid_argument("agent mismatch for " + name);
    plan.steps.push_back(*a);
    plan.cost += a->cost;
    ++expected;
  }
  return plan;
}

}  // namespace mmrec::planner
