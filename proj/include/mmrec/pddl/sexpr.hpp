// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mmrec::pddl {

/// One node of a parsed s-expression. Symbols are lowercased on read since
/// PDDL names are case-insensitive.
struct SExpr {
  bool is_list = false;
  std::string symbol;
  std::vector<SExpr> items;
  int line = 0;
  int column = 0;

  bool is_symbol() const { return !is_list; }
  bool is_symbol(std::string_view s) const { return !is_list && symbol == s; }
  /// True when this is a list whose head is the symbol `head`.
  bool has_head(std::string_view head) const {
    return is_list && !items.empty() && items.front().is_symbol(head);
  }
};

/// Parses every top-level expression in `text`. `;` starts a line comment.
std::vector<SExpr> read_sexprs(std::string_view text);

}  // namespace mmrec::pddl
