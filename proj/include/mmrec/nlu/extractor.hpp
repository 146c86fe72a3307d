// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmrec/context/context_model.hpp"
#include "mmrec/context/vocabulary.hpp"
#include "mmrec/nlu/llm_client.hpp"
#include "mmrec/nlu/types.hpp"

namespace mmrec::nlu {

enum class NluMode { Grammar, Llm, LlmWithGrammarFallback };
const char* to_string(NluMode m);
std::optional<NluMode> parse_nlu_mode(std::string_view s);

struct RestatementMatch {
  bool matched = false;
  std::vector<context::FactKey> missing;
};

/// Turns utterances into fact deltas. Structured utterances go through the
/// grammar; free text goes to the chat endpoint (when the mode allows it).
/// LLM output is validated against the JSON contract and the vocabulary; one
/// repair reprompt is sent on failure.
class FactExtractor {
 public:
  FactExtractor(NluMode mode, context::Vocabulary vocabulary, std::shared_ptr<ChatTransport> transport = nullptr);

  NluMode mode() const { return mode_; }

  /// `human_visible` is what the robot has told the human so far. Ground
  /// truth never enters the prompt.
  FactExtraction extract_facts(const Utterance& utterance, const context::ContextModel& robot_ctx,
                               const std::vector<context::Fact>& human_visible) const;

  RestatementMatch match_restatement(const Utterance& restatement,
                                     const std::vector<context::Fact>& communicated) const;

  /// Exposed for tests and for logging.
  std::string system_prompt(const context::ContextModel& robot_ctx,
                            const std::vector<context::Fact>& human_visible) const;

 private:
  FactExtraction ask_llm(const Utterance& utterance, const context::ContextModel& robot_ctx,
                         const std::vector<context::Fact>& human_visible) const;
  FactExtraction raw_extract(const Utterance& utterance, const context::ContextModel& robot_ctx,
                             const std::vector<context::Fact>& human_visible) const;
  void check_vocabulary(const FactExtraction& e, const context::ContextModel& robot_ctx) const;

  NluMode mode_;
  context::Vocabulary vocabulary_;
  std::shared_ptr<ChatTransport> transport_;
};

/// Parses the LLM JSON contract. Returns an error description on violation.
std::optional<std::string> parse_llm_extraction(const nlohmann::json& j, FactExtraction& out);

}  // namespace mmrec::nlu
