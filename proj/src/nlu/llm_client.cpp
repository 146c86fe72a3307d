// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/nlu/llm_client.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <httplib.h>

#include "mmrec/nlu/types.hpp"

namespace mmrec::nlu {

void LlmEndpointConfig::validate() const {
  if (base_url.empty()) throw std::invalid_argument("LLM endpoint base_url is empty");
  if (timeout.count() <= 0) throw std::invalid_argument("LLM timeout must be positive");
  if (max_retries < 0) throw std::invalid_argument("LLM max_retries must be >= 0");
}

LlmEndpointConfig LlmEndpointConfig::from_env() {
  LlmEndpointConfig c;
  if (const char* url = std::getenv("MMREC_LLM_URL")) c.base_url = url;
  if (const char* model = std::getenv("MMREC_LLM_MODEL")) c.model = model;
  return c;
}

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing '/'
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("LLM base_url needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  out.origin = url.substr(0, path_start);
  out.prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

}  // namespace

HttpChatTransport::HttpChatTransport(LlmEndpointConfig config) : config_(std::move(config)) { config_.validate(); }

std::string HttpChatTransport::complete(const std::vector<ChatMessage>& messages) {
  const SplitUrl url = split_url(config_.base_url);
  nlohmann::json body{{"model", config_.model}, {"temperature", config_.temperature}};
  body["messages"] = nlohmann::json::array();
  for (const auto& m : messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});

  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key != nullptr && *key != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(100 * attempt));
    httplib::Client client(url.origin);
    const auto secs = config_.timeout.count() / 1000;
    const auto usecs = (config_.timeout.count() % 1000) * 1000;
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    auto res = client.Post(url.prefix + "/chat/completions", headers, body.dump(), "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw NluError(NluError::Kind::EndpointUnavailable, "HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    try {
      auto j = nlohmann::json::parse(res->body);
      return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw NluError(NluError::Kind::EndpointUnavailable, std::string("malformed completion response: ") + e.what());
    }
  }
  throw NluError(NluError::Kind::EndpointUnavailable, last_error);
}

RecordedTransport::RecordedTransport(std::vector<std::string> completions) : completions_(std::move(completions)) {}

std::shared_ptr<RecordedTransport> RecordedTransport::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open transcript " + path);
  nlohmann::json j;
  in >> j;
  return std::make_shared<RecordedTransport>(j.at("completions").get<std::vector<std::string>>());
}

std::string RecordedTransport::complete(const std::vector<ChatMessage>& messages) {
  requests_.push_back(messages);
  if (next_ >= completions_.size()) {
    throw NluError(NluError::Kind::EndpointUnavailable, "recorded transcript exhausted");
  }
  return completions_[next_++];
}

std::optional<nlohmann::json> first_json_object(std::string_view text) {
  for (std::size_t start = text.find('{'); start != std::string_view::npos; start = text.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        auto parsed = nlohmann::json::parse(text.substr(start, i - start + 1), nullptr, false);
        if (!parsed.is_discarded() && parsed.is_object()) return parsed;
        break;
      }
    }
  }
  return std::nullopt;
}

}  // namespace mmrec::nlu
