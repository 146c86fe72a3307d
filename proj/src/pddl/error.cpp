// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/pddl/error.hpp"

namespace mmrec::pddl {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::LexError: return "LexError";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::UnknownType: return "UnknownType";
    case ErrorKind::CyclicTypes: return "CyclicTypes";
    case ErrorKind::UnknownPredicate: return "UnknownPredicate";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::UnknownObject: return "UnknownObject";
    case ErrorKind::UnknownObjectType: return "UnknownObjectType";
    case ErrorKind::InitIllTyped: return "InitIllTyped";
    case ErrorKind::GoalIllTyped: return "GoalIllTyped";
    case ErrorKind::MissingAgentParameter: return "MissingAgentParameter";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::GroundingExplosion: return "GroundingExplosion";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
  }
  return "Unknown";
}

PddlError::PddlError(ErrorKind kind, const std::string& message, int line, int column)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message +
                         (line > 0 ? " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"
                                   : std::string())),
      kind_(kind),
      line_(line),
      column_(column) {}

}  // namespace mmrec::pddl
