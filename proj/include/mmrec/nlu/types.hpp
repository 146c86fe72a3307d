// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mmrec/context/fact.hpp"

namespace mmrec::nlu {

enum class Speaker { Human, Robot };
const char* to_string(Speaker s);

struct Utterance {
  Speaker speaker = Speaker::Human;
  std::string text;
  std::uint64_t timestamp = 0;
};

enum class Attribution { MissingFromRobot, MissingFromHuman, Both, NoNewInformation };
const char* to_string(Attribution a);

enum class ExtractionSource { Grammar, Llm };
const char* to_string(ExtractionSource s);

/// "Why `asked` rather than `instead_of`?" Either side may be kNoAction
/// when the agent was idle.
struct Query {
  std::string asked;
  std::string instead_of;
  friend bool operator==(const Query&, const Query&) = default;
};

inline constexpr std::string_view kNoAction = "none";

struct FactExtraction {
  std::vector<context::Fact> facts;
  Attribution attribution = Attribution::NoNewInformation;
  ExtractionSource source = ExtractionSource::Grammar;
  std::optional<Query> query;
};

class NluError : public std::runtime_error {
 public:
  enum class Kind { EndpointUnavailable, SchemaViolation, VocabularyViolation };
  NluError(Kind kind, const std::string& message);
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace mmrec::nlu
