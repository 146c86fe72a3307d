// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmrec/pddl/ast.hpp"

namespace mmrec::context {

enum class Category { Object, Init, Goal, Capability, Preference };
enum class Polarity { Positive, Negative };

const char* to_string(Category c);
const char* to_string(Polarity p);  // "+" / "-"
std::optional<Category> parse_category(std::string_view s);
std::optional<Polarity> parse_polarity(std::string_view s);

/// Canonical fact identity. The gloss is not part of it.
struct FactKey {
  std::string value;
  friend auto operator<=>(const FactKey&, const FactKey&) = default;
};

/// One piece of task knowledge.
///  object:      subject is an object, relation its type
///  init/goal/preference: the atom (relation subject args...)
///  capability:  relation is an action schema; Negative = forbidden for subject
struct Fact {
  Category category = Category::Init;
  std::string subject;
  std::string relation;
  std::vector<std::string> args;
  Polarity polarity = Polarity::Positive;
  std::string gloss;

  FactKey key() const;
  /// The atom an init/goal/preference fact asserts about.
  pddl::Atom atom() const;
  bool positive() const { return polarity == Polarity::Positive; }

  friend bool operator==(const Fact&, const Fact&) = default;
};

/// Lowercases and collapses whitespace runs; the normal form of every name.
std::string normalize_name(std::string_view s);

/// Applies normalize_name to all name fields; fills an empty gloss with a
/// generated sentence. Throws std::invalid_argument on empty names.
Fact canonical(Fact f);

std::string default_gloss(const Fact& f);

}  // namespace mmrec::context
