// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/pddl/ast.hpp"

#include <algorithm>
#include <set>

namespace mmrec::pddl {

std::string Atom::str() const {
  std::string out = "(" + predicate;
  for (const auto& a : args) {
    out += ' ';
    out += a;
  }
  out += ')';
  return out;
}

bool Domain::has_type(std::string_view type) const {
  if (type == kRootType) return true;
  return std::any_of(types.begin(), types.end(), [&](const TypedName& t) { return t.name == type; });
}

bool Domain::is_subtype(std::string_view type, std::string_view ancestor) const {
  if (ancestor == kRootType) return has_type(type);
  std::string_view current = type;
  // Bounded walk; the parser rejects cycles, this only guards hand-built domains.
  for (std::size_t guard = 0; guard <= types.size(); ++guard) {
    if (current == ancestor) return true;
    auto it = std::find_if(types.begin(), types.end(),
                           [&](const TypedName& t) { return t.name == current; });
    if (it == types.end()) return false;
    current = it->type;
  }
  return false;
}

const PredicateDecl* Domain::find_predicate(std::string_view name) const {
  auto it = std::find_if(predicates.begin(), predicates.end(),
                         [&](const PredicateDecl& p) { return p.name == name; });
  return it == predicates.end() ? nullptr : &*it;
}

const ActionSchema* Domain::find_action(std::string_view name) const {
  auto it = std::find_if(actions.begin(), actions.end(),
                         [&](const ActionSchema& a) { return a.name == name; });
  return it == actions.end() ? nullptr : &*it;
}

std::vector<std::string> Domain::fluent_predicates() const {
  std::set<std::string> names;
  for (const auto& a : actions) {
    for (const auto& l : a.add) names.insert(l.predicate);
    for (const auto& l : a.del) names.insert(l.predicate);
  }
  return {names.begin(), names.end()};
}

std::optional<std::string> Problem::type_of(std::string_view object, const Domain& domain) const {
  for (const auto& o : objects) {
    if (o.name == object) return o.type;
  }
  for (const auto& c : domain.constants) {
    if (c.name == object) return c.type;
  }
  return std::nullopt;
}

}  // namespace mmrec::pddl
