// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include "mmrec/pddl/ast.hpp"

namespace mmrec::pddl {

/// Parses a STRIPS + typing domain. Every action schema must carry a
/// parameter of type `agent` (or a subtype); the first such parameter is the
/// acting agent. Throws PddlError.
Domain parse_domain(std::string_view text);

/// Parses a problem and checks it against `domain`. Throws PddlError.
Problem parse_problem(std::string_view text, const Domain& domain);

/// Canonical pretty-printers; `parse(print(x)) == x`.
std::string print_domain(const Domain& domain);
std::string print_problem(const Problem& problem);

std::string read_file(const std::string& path);

}  // namespace mmrec::pddl
