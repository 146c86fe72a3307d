// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmrec/context/fact.hpp"
#include "mmrec/pddl/ast.hpp"

namespace mmrec::context {

/// The names a fact may use: the base domain's types, predicates and action
/// schemas, plus the base problem's objects.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(const pddl::Domain& domain, const pddl::Problem& problem);

  /// Empty when the fact is well-formed against this vocabulary, otherwise a
  /// description of the first violation. `extra_objects` are objects the
  /// fact's own context introduces (object facts), as (name, type).
  std::optional<std::string> check(const Fact& fact,
                                   const std::map<std::string, std::string>& extra_objects = {}) const;

  /// Checks a batch, letting object facts in the batch introduce names.
  std::optional<std::string> check_all(std::span<const Fact> facts,
                                       const std::map<std::string, std::string>& extra_objects = {}) const;

  const pddl::Domain& domain() const { return domain_; }
  const std::map<std::string, std::string>& objects() const { return objects_; }
  std::vector<std::string> predicate_names() const;
  std::vector<std::string> schema_names() const;
  std::vector<std::string> type_names() const;

 private:
  pddl::Domain domain_;
  std::map<std::string, std::string> objects_;
};

}  // namespace mmrec::context
