// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmrec::pddl {

inline constexpr std::string_view kRootType = "object";
inline constexpr std::string_view kAgentType = "agent";

struct TypedName {
  std::string name;
  std::string type;
  friend bool operator==(const TypedName&, const TypedName&) = default;
};

/// A lifted literal; arguments are `?variables` or constant names.
struct Literal {
  std::string predicate;
  std::vector<std::string> args;
  friend bool operator==(const Literal&, const Literal&) = default;
};

/// A ground atom. Its canonical text is `(predicate arg1 arg2)`.
struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  std::string str() const;
  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom& a, const Atom& b) { return a.str() <=> b.str(); }
};

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> params;
  friend bool operator==(const PredicateDecl&, const PredicateDecl&) = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<Literal> precondition;
  std::vector<Literal> add;
  std::vector<Literal> del;
  /// Index into `params` of the acting agent.
  std::size_t agent_param = 0;
  friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

struct Domain {
  std::string name;
  std::vector<std::string> requirements;
  /// (type, parent) pairs in declaration order; `object` is implicit.
  std::vector<TypedName> types;
  std::vector<TypedName> constants;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionSchema> actions;

  bool has_type(std::string_view type) const;
  /// Reflexive-transitive subtype test along the parent chain.
  bool is_subtype(std::string_view type, std::string_view ancestor) const;
  const PredicateDecl* find_predicate(std::string_view name) const;
  const ActionSchema* find_action(std::string_view name) const;
  /// Predicates that appear in some action effect. All others are static.
  std::vector<std::string> fluent_predicates() const;

  friend bool operator==(const Domain&, const Domain&) = default;
};

struct Problem {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  std::vector<Atom> init;
  std::vector<Atom> goal;

  /// Looks up an object among the problem objects, then the domain constants.
  std::optional<std::string> type_of(std::string_view object, const Domain& domain) const;

  friend bool operator==(const Problem&, const Problem&) = default;
};

}  // namespace mmrec::pddl
