// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/harness/scenario.hpp"

#include <fstream>

#include <json.hpp>

#include "mmrec/context/compiler.hpp"
#include "mmrec/context/fact_io.hpp"
#include "mmrec/context/vocabulary.hpp"
#include "mmrec/pddl/error.hpp"
#include "mmrec/pddl/parser.hpp"

namespace mmrec::harness {

namespace fs = std::filesystem;
using context::ContextModel;
using context::Owner;

const char* to_string(Condition c) {
  switch (c) {
    case Condition::RobotIncomplete: return "robot-incomplete";
    case Condition::HumanIncomplete: return "human-incomplete";
    case Condition::BothIncomplete: return "both-incomplete";
    case Condition::NeitherIncomplete: return "neither-incomplete";
  }
  return "?";
}

std::optional<Condition> parse_condition(std::string_view s) {
  for (auto c : {Condition::RobotIncomplete, Condition::HumanIncomplete, Condition::BothIncomplete,
                 Condition::NeitherIncomplete}) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

namespace {

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ScenarioInvalid("cannot read " + p.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

ContextModel load_context(const fs::path& p, Owner owner) {
  try {
    return ContextModel(owner, context::load_facts(p.string()));
  } catch (const ScenarioInvalid&) {
    throw;
  } catch (const std::exception& e) {
    throw ScenarioInvalid("bad fact file " + p.string() + ": " + e.what());
  }
}

std::string field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw ScenarioInvalid(std::string("manifest needs string '") + key + "'");
  return j[key].get<std::string>();
}

}  // namespace

reconciler::World Scenario::initial_world() const {
  const auto truth = context::compile_context(domain, problem, ground_truth);
  return reconciler::initial_world(domain, truth.task);
}

Scenario load_scenario(const fs::path& path) {
  const fs::path manifest = fs::is_directory(path) ? path / kManifestName : path;
  if (!fs::exists(manifest)) throw ScenarioInvalid("missing manifest " + manifest.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(manifest));
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioInvalid("manifest " + manifest.string() + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ScenarioInvalid("manifest must be a JSON object");
  const fs::path dir = manifest.parent_path();
  Scenario s;
  s.dir = dir;
  s.name = j.value("name", dir.filename().string());
  const auto condition = parse_condition(field(j, "condition"));
  if (!condition) throw ScenarioInvalid("unknown condition '" + field(j, "condition") + "'");
  s.condition = *condition;
  try {
    s.domain = pddl::parse_domain(read_text(dir / field(j, "domain")));
    s.problem = pddl::parse_problem(read_text(dir / field(j, "problem")), s.domain);
  } catch (const pddl::PddlError& e) {
    throw ScenarioInvalid(std::string("PDDL error: ") + e.what());
  }
  s.ground_truth = load_context(dir / field(j, "ground_truth"), Owner::GroundTruth);
  s.robot_facts = load_context(dir / field(j, "robot_facts"), Owner::Robot);
  s.human_facts = load_context(dir / field(j, "human_facts"), Owner::Human);
  if (j.contains("epsilon")) {
    if (!j["epsilon"].is_number() || j["epsilon"].get<double>() < 0) throw ScenarioInvalid("epsilon must be >= 0");
    s.epsilon = j["epsilon"].get<double>();
  }
  if (j.contains("flags")) {
    const auto& flags = j["flags"];
    if (!flags.is_object()) throw ScenarioInvalid("'flags' must be an object");
    s.tolerate_reordering = flags.value("tolerate_reordering", false);
  }
  s.robot_agent = j.value("robot_agent", s.robot_agent);
  s.human_agent = j.value("human_agent", s.human_agent);
  check_invariants(s);
  return s;
}

void check_invariants(const Scenario& s) {
  for (const auto& [k, _] : s.robot_facts.facts()) {
    if (!s.ground_truth.contains(k)) throw ScenarioInvalid("robot fact not in ground truth: " + k.value);
  }
  for (const auto& [k, _] : s.human_facts.facts()) {
    if (!s.ground_truth.contains(k)) throw ScenarioInvalid("human fact not in ground truth: " + k.value);
  }
  if (context::edit_distance(context::union_of(s.robot_facts, s.human_facts), s.ground_truth) != 0) {
    throw ScenarioInvalid("union of robot and human facts differs from the ground truth");
  }
  for (const auto& agent : {s.robot_agent, s.human_agent}) {
    const auto type = s.problem.type_of(agent, s.domain);
    if (!type || !s.domain.is_subtype(*type, pddl::kAgentType)) {
      throw ScenarioInvalid("'" + agent + "' is not an agent object of the base problem");
    }
  }
  for (const auto* ctx : {&s.ground_truth, &s.robot_facts, &s.human_facts}) {
    try {
      context::compile_context(s.domain, s.problem, *ctx);
    } catch (const std::exception& e) {
      throw ScenarioInvalid(std::string(context::to_string(ctx->owner())) + " context does not compile: " + e.what());
    }
  }
}

}  // namespace mmrec::harness
