// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/context/compiler.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mmrec/context/vocabulary.hpp"

namespace mmrec::context {

CompileError::CompileError(Kind kind, Fact fact, const std::string& detail)
    : std::runtime_error((kind == Kind::UnknownVocabulary ? "UnknownVocabulary: " : "CompileConflict: ") + detail +
                         " [" + fact.key().value + "]"),
      kind_(kind),
      fact_(std::move(fact)) {}

namespace {

bool mentions(const pddl::Atom& a, const std::string& object) {
  return std::find(a.args.begin(), a.args.end(), object) != a.args.end();
}

void add_atom(std::vector<pddl::Atom>& atoms, pddl::Atom atom) {
  if (std::find(atoms.begin(), atoms.end(), atom) == atoms.end()) atoms.push_back(std::move(atom));
}

void remove_atom(std::vector<pddl::Atom>& atoms, const pddl::Atom& atom) { std::erase(atoms, atom); }

}  // namespace

CompiledModel compile_context(const pddl::Domain& base_domain, const pddl::Problem& base_problem,
                              const ContextModel& context, const pddl::GroundingOptions& options) {
  CompiledModel out;
  out.domain = base_domain;
  out.problem = base_problem;
  out.source_revision = context.revision();

  const Vocabulary vocabulary(base_domain, base_problem);
  std::map<std::string, std::string> introduced;
  for (const auto& [_, f] : context.facts()) {
    if (f.category == Category::Object && f.positive()) introduced.emplace(f.subject, f.relation);
  }
  // Positive and negative init facts about the same atom contradict each other.
  std::map<std::string, Polarity> init_polarity;
  for (const auto& [_, f] : context.facts()) {
    if (auto err = vocabulary.check(f, introduced)) {
      throw CompileError(CompileError::Kind::UnknownVocabulary, f, *err);
    }
    if (f.category == Category::Init) {
      auto [it, fresh] = init_polarity.emplace(f.atom().str(), f.polarity);
      if (!fresh && it->second != f.polarity) {
        throw CompileError(CompileError::Kind::CompileConflict, f, "init fact asserted with both polarities");
      }
    }
  }

  std::set<std::pair<std::string, std::string>> forbidden;  // (agent, schema)
  for (const auto& [_, f] : context.facts()) {
    switch (f.category) {
      case Category::Object:
        if (f.positive()) {
          auto& objs = out.problem.objects;
          if (std::none_of(objs.begin(), objs.end(), [&](const pddl::TypedName& o) { return o.name == f.subject; })) {
            objs.push_back({f.subject, f.relation});
          }
        } else {
          std::erase_if(out.problem.objects, [&](const pddl::TypedName& o) { return o.name == f.subject; });
          std::erase_if(out.problem.init, [&](const pddl::Atom& a) { return mentions(a, f.subject); });
          std::erase_if(out.problem.goal, [&](const pddl::Atom& a) { return mentions(a, f.subject); });
        }
        break;
      case Category::Init:
        if (f.positive()) {
          add_atom(out.problem.init, f.atom());
        } else {
          remove_atom(out.problem.init, f.atom());
        }
        break;
      case Category::Goal:
      case Category::Preference:
        if (f.positive()) {
          add_atom(out.problem.goal, f.atom());
        } else {
          remove_atom(out.problem.goal, f.atom());
        }
        break;
      case Category::Capability:
        if (!f.positive()) forbidden.emplace(f.subject, f.relation);
        break;
    }
  }

  pddl::GroundingOptions grounding = options;
  if (!forbidden.empty()) {
    auto previous = options.keep;
    grounding.keep = [forbidden, previous](const pddl::ActionSchema& schema, std::span<const std::string> binding) {
      if (forbidden.count({binding[schema.agent_param], schema.name}) != 0) return false;
      return !previous || previous(schema, binding);
    };
  }
  out.task = pddl::ground_task(out.domain, out.problem, grounding);
  return out;
}

}  // namespace mmrec::context
