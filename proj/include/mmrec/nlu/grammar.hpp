// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "mmrec/nlu/types.hpp"

namespace mmrec::nlu {

// Structured utterances are one or more clauses separated by ';':
//
//   fact: <category> <subject> <relation> [<arg>...] <+|-> missing-from: <robot|human|both>
//   why: <action|none> instead-of: <action|none>
//
// Keywords are case-insensitive. All fact clauses of one utterance must carry
// the same missing-from target, and a why clause cannot be mixed with facts.

/// nullopt means "not structured"; never throws.
std::optional<FactExtraction> parse_structured(std::string_view text);

/// Attribution must not be NoNewInformation.
std::string render_fact_utterance(const context::Fact& fact, Attribution attribution);
std::string render_facts_utterance(std::span<const context::Fact> facts, Attribution attribution);
std::string render_query_utterance(const Query& query);

}  // namespace mmrec::nlu
