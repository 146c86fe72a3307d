// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace mmrec::pddl {

enum class ErrorKind {
  LexError,
  SyntaxError,
  Unsupported,
  DuplicateName,
  UnknownType,
  CyclicTypes,
  UnknownPredicate,
  ArityMismatch,
  UnboundVariable,
  UnknownObject,
  UnknownObjectType,
  InitIllTyped,
  GoalIllTyped,
  MissingAgentParameter,
  DomainMismatch,
  GroundingExplosion,
  PreconditionViolated,
};

const char* to_string(ErrorKind kind);

/// Raised by the parser, grounder and state transition functions.
/// `line`/`column` are 1-based source positions, or 0 when not applicable.
class PddlError : public std::runtime_error {
 public:
  PddlError(ErrorKind kind, const std::string& message, int line = 0, int column = 0);

  ErrorKind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  ErrorKind kind_;
  int line_;
  int column_;
};

}  // namespace mmrec::pddl
