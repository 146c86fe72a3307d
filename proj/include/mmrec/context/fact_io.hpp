// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mmrec/context/fact.hpp"

namespace mmrec::context {

// Fact files are JSON arrays of
//   {"category", "subject", "relation", "args", "polarity", "gloss"}
// with polarity "+" or "-" ("positive"/"negative" are accepted on read).

void to_json(nlohmann::json& j, const Fact& f);
void from_json(const nlohmann::json& j, Fact& f);

/// Throws std::runtime_error with the offending index on malformed records.
std::vector<Fact> facts_from_json(const nlohmann::json& j);
std::vector<Fact> load_facts(const std::string& path);
void save_facts(const std::string& path, const std::vector<Fact>& facts);

}  // namespace mmrec::context
