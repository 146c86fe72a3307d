// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

#include "mmrec/context/context_model.hpp"
#include "mmrec/pddl/ast.hpp"
#include "mmrec/pddl/task.hpp"

namespace mmrec::context {

struct CompiledModel {
  pddl::Domain domain;
  pddl::Problem problem;
  pddl::GroundedTask task;
  int source_revision = 0;

  friend bool operator==(const CompiledModel&, const CompiledModel&) = default;
};

class CompileError : public std::runtime_error {
 public:
  enum class Kind { UnknownVocabulary, CompileConflict };
  CompileError(Kind kind, Fact fact, const std::string& detail);
  Kind kind() const noexcept { return kind_; }
  const Fact& fact() const noexcept { return fact_; }

 private:
  Kind kind_;
  Fact fact_;
};

/// Rewrites the base problem with the context's facts and grounds it:
///  object +       adds the object (object - drops it and atoms naming it)
///  init +/-       adds/removes the init atom
///  goal|pref +/-  adds/removes the goal atom
///  capability -   drops every grounded action of that schema for that agent
/// The domain itself is never changed.
CompiledModel compile_context(const pddl::Domain& base_domain, const pddl::Problem& base_problem,
                              const ContextModel& context, const pddl::GroundingOptions& options = {});

}  // namespace mmrec::context
