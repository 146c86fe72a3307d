// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mmrec/context/fact.hpp"
#include "mmrec/reconciler/world.hpp"

namespace mmrec::reconciler {

/// The steps of `trace` that depend on the last occurrence of `anchor`: the
/// anchor itself plus every later step consuming an atom the chain produced.
std::vector<ActionAtoms> causal_chain(std::span<const ActionAtoms> trace, std::string_view anchor);

/// Facts from `candidates` that account for choosing `anchor` (looked up in
/// the agent's own `trace`) over `foil`. A fact is relevant when it is a
/// precondition of the chain, a goal the chain achieves, an object the chain
/// manipulates, or something that rules the foil out. Ranked capability >
/// goal/preference > init > object, then by key.
std::vector<context::Fact> select_relevant(std::span<const context::Fact> candidates,
                                           std::span<const ActionAtoms> trace, std::string_view anchor,
                                           const std::optional<ActionAtoms>& foil);

int relevance_rank(context::Category c);

}  // namespace mmrec::reconciler
