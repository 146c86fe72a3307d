// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/reconciler/types.hpp"

#include "mmrec/context/fact_io.hpp"

namespace mmrec::reconciler {

const char* to_string(Mode m) { return m == Mode::Simulated ? "simulated" : "live"; }

const char* to_string(Phase p) {
  switch (p) {
    case Phase::Executing: return "executing";
    case Phase::AwaitingClarification: return "awaiting_clarification";
    case Phase::AwaitingRestatement: return "awaiting_restatement";
    case Phase::Terminated: return "terminated";
  }
  return "?";
}

const char* to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::None: return "none";
    case TerminationReason::Converged: return "converged";
    case TerminationReason::Unresolved: return "unresolved";
    case TerminationReason::Error: return "error";
  }
  return "?";
}

const char* to_string(Direction d) { return d == Direction::RobotToHuman ? "robot_to_human" : "human_to_robot"; }

void ExplanationLog::append(Explanation e) {
  if (e.direction == Direction::RobotToHuman) {
    ++n_;
  } else {
    ++m_;
  }
  entries_.push_back(std::move(e));
}

std::string to_json_line(const Event& e) {
  nlohmann::json j{{"tick", e.tick}, {"kind", e.kind}, {"payload", e.payload}};
  return j.dump();
}

std::string to_json_lines(const std::vector<Event>& events) {
  std::string out;
  for (const auto& e : events) {
    out += to_json_line(e);
    out += '\n';
  }
  return out;
}

nlohmann::json facts_json(const std::vector<context::Fact>& facts) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : facts) arr.push_back(f);
  return arr;
}

nlohmann::json to_json(const Violation& v) {
  return {{"expected", v.expected.name},
          {"observed", v.observed.name},
          {"agent", v.expected.agent.empty() ? v.observed.agent : v.expected.agent},
          {"step_index", v.step_index},
          {"precondition_failed", v.precondition_failed}};
}

nlohmann::json to_json(const Explanation& e) {
  return {{"direction", to_string(e.direction)}, {"facts", facts_json(e.facts)}, {"text", e.text},
          {"iteration", e.iteration}};
}

}  // namespace mmrec::reconciler
