// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmrec/context/fact.hpp"
#include "mmrec/reconciler/world.hpp"

namespace mmrec::reconciler {

enum class Mode { Simulated, Live };
const char* to_string(Mode m);

enum class Phase { Executing, AwaitingClarification, AwaitingRestatement, Terminated };
const char* to_string(Phase p);

enum class TerminationReason { None, Converged, Unresolved, Error };
const char* to_string(TerminationReason r);

/// A mismatch between what an agent expected of its teammate and what it saw.
/// `observed` may be idle; `precondition_failed` marks an action that was
/// impossible in the world.
struct Violation {
  ActionAtoms expected;
  ActionAtoms observed;
  std::size_t step_index = 0;
  bool precondition_failed = false;
};

enum class Direction { RobotToHuman, HumanToRobot };
const char* to_string(Direction d);

struct Explanation {
  Direction direction = Direction::RobotToHuman;
  std::vector<context::Fact> facts;
  std::string text;
  int iteration = 0;
};

class ExplanationLog {
 public:
  void append(Explanation e);
  const std::vector<Explanation>& entries() const { return entries_; }
  std::size_t n() const { return n_; }  // robot to human
  std::size_t m() const { return m_; }  // human to robot
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<Explanation> entries_;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
};

struct Event {
  std::uint64_t tick = 0;
  std::string kind;
  nlohmann::json payload;
};

std::string to_json_line(const Event& e);
std::string to_json_lines(const std::vector<Event>& events);

nlohmann::json to_json(const Violation& v);
nlohmann::json to_json(const Explanation& e);
nlohmann::json facts_json(const std::vector<context::Fact>& facts);

}  // namespace mmrec::reconciler
