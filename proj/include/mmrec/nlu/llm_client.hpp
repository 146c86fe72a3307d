// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mmrec::nlu {

struct LlmEndpointConfig {
  /// Scheme, host, port and optional path prefix, e.g. "http://localhost:8080/v1".
  std::string base_url;
  std::string model = "gpt-4o-mini";
  /// Name of the environment variable holding the bearer token.
  std::string api_key_env = "MMREC_LLM_API_KEY";
  std::chrono::milliseconds timeout{30000};
  int max_retries = 2;
  double temperature = 0.0;

  /// Throws std::invalid_argument when timeout <= 0, retries < 0 or the URL is empty.
  void validate() const;
  /// Reads MMREC_LLM_URL / MMREC_LLM_MODEL; empty base_url when unset.
  static LlmEndpointConfig from_env();
};

struct ChatMessage {
  std::string role;
  std::string content;
};

/// One chat-completion round trip. Implementations throw
/// NluError(EndpointUnavailable) when no completion could be obtained.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
};

/// POSTs OpenAI-style `{model, temperature, messages}` to
/// `<base_url>/chat/completions` and returns `choices[0].message.content`.
/// Retries transport failures, 429 and 5xx up to `max_retries` times.
class HttpChatTransport : public ChatTransport {
 public:
  explicit HttpChatTransport(LlmEndpointConfig config);
  std::string complete(const std::vector<ChatMessage>& messages) override;

 private:
  LlmEndpointConfig config_;
};

/// Replays canned completions in order; records every request. Used by tests
/// and for offline replays of captured transcripts.
class RecordedTransport : public ChatTransport {
 public:
  explicit RecordedTransport(std::vector<std::string> completions);
  /// Transcript file: {"completions": ["...", ...]}.
  static std::shared_ptr<RecordedTransport> from_file(const std::string& path);

  std::string complete(const std::vector<ChatMessage>& messages) override;
  const std::vector<std::vector<ChatMessage>>& requests() const { return requests_; }

 private:
  std::vector<std::string> completions_;
  std::size_t next_ = 0;
  std::vector<std::vector<ChatMessage>> requests_;
};

/// Extracts the first balanced JSON object embedded in `text` (code fences
/// and surrounding prose are skipped). nullopt when there is none.
std::optional<nlohmann::json> first_json_object(std::string_view text);

}  // namespace mmrec::nlu
