// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/context/vocabulary.hpp"

#include <cctype>

namespace mmrec::context {

namespace {

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (!(std::isalnum(c) || c == '_' || c == '-')) return false;
  }
  return std::isalpha(static_cast<unsigned char>(s.front()));
}

}  // namespace

Vocabulary::Vocabulary(const pddl::Domain& domain, const pddl::Problem& problem) : domain_(domain) {
  for (const auto& c : domain.constants) objects_[c.name] = c.type;
  for (const auto& o : problem.objects) objects_[o.name] = o.type;
}

std::optional<std::string> Vocabulary::check(const Fact& f,
                                             const std::map<std::string, std::string>& extra_objects) const {
  auto type_of = [&](const std::string& obj) -> std::optional<std::string> {
    if (auto it = objects_.find(obj); it != objects_.end()) return it->second;
    if (auto it = extra_objects.find(obj); it != extra_objects.end()) return it->second;
    return std::nullopt;
  };
  if (f.gloss.find_first_not_of(" \t\r\n") == std::string::npos) return "fact has no gloss";
  switch (f.category) {
    case Category::Object: {
      if (!is_identifier(f.subject)) return "invalid object name '" + f.subject + "'";
      if (!f.args.empty()) return "object facts take no arguments";
      if (!domain_.has_type(f.relation)) return "unknown type '" + f.relation + "'";
      if (auto known = type_of(f.subject); known && *known != f.relation) {
        return "object '" + f.subject + "' already has type '" + *known + "'";
      }
      return std::nullopt;
    }
    case Category::Capability: {
      if (!f.args.empty()) return "capability facts take no arguments";
      if (domain_.find_action(f.relation) == nullptr) return "unknown action schema '" + f.relation + "'";
      auto t = type_of(f.subject);
      if (!t) return "unknown agent '" + f.subject + "'";
      if (!domain_.is_subtype(*t, pddl::kAgentType)) return "'" + f.subject + "' is not an agent";
      return std::nullopt;
    }
    case Category::Init:
    case Category::Goal:
    case Category::Preference: {
      const pddl::PredicateDecl* p = domain_.find_predicate(f.relation);
      if (p == nullptr) return "unknown predicate '" + f.relation + "'";
      const pddl::Atom atom = f.atom();
      if (atom.args.size() != p->params.size()) {
        return "predicate '" + f.relation + "' takes " + std::to_string(p->params.size()) + " arguments";
      }
      for (std::size_t i = 0; i < atom.args.size(); ++i) {
        auto t = type_of(atom.args[i]);
        if (!t) return "unknown object '" + atom.args[i] + "'";
        if (!domain_.is_subtype(*t, p->params[i].type)) {
          return "object '" + atom.args[i] + "' is not a " + p->params[i].type;
        }
      }
      return std::nullopt;
    }
  }
  return "unknown category";
}

std::optional<std::string> Vocabulary::check_all(std::span<const Fact> facts,
                                                 const std::map<std::string, std::string>& extra_objects) const {
  std::map<std::string, std::string> extra = extra_objects;
  for (const auto& f : facts) {
    if (f.category == Category::Object && f.positive()) extra.emplace(f.subject, f.relation);
  }
  for (const auto& f : facts) {
    if (auto err = check(f, extra)) return err;
  }
  return std::nullopt;
}

std::vector<std::string> Vocabulary::predicate_names() const {
  std::vector<std::string> out;
  for (const auto& p : domain_.predicates) out.push_back(p.name);
  return out;
}

std::vector<std::string> Vocabulary::schema_names() const {
  std::vector<std::string> out;
  for (const auto& a : domain_.actions) out.push_back(a.name);
  return out;
}

std::vector<std::string> Vocabulary::type_names() const {
  std::vector<std::string> out{std::string(pddl::kRootType)};
  for (const auto& t : domain_.types) out.push_back(t.name);
  return out;
}

}  // namespace mmrec::context
