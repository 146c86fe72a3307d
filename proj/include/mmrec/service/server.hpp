// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "mmrec/nlu/extractor.hpp"

namespace httplib {
class Server;
}

namespace mmrec::reconciler {
class Session;
}

namespace mmrec::service {

struct ServerOptions {
  std::filesystem::path scenarios_root;
  nlu::NluMode default_nlu = nlu::NluMode::LlmWithGrammarFallback;
  /// Builds the chat transport for LLM-backed sessions; null means none.
  std::function<std::shared_ptr<nlu::ChatTransport>()> transport_factory;
  /// When set, a session's event log is written here once it terminates.
  std::optional<std::filesystem::path> log_dir;
  /// Robot steps taken per request before yielding to the human.
  int max_robot_steps = 64;
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  std::map<std::string, std::string> headers;
};

/// Serializes access to one session in arrival order.
class TicketLock {
 public:
  std::uint64_t take();
  void wait(std::uint64_t ticket);
  void release();

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::uint64_t next_ = 0;
  std::uint64_t serving_ = 0;
};

/// Live sessions behind the REST routes, independent of the HTTP layer.
class Service {
 public:
  explicit Service(ServerOptions options);
  ~Service();

  Response create_session(const std::string& body);
  Response get_state(const std::string& id);
  Response post_utterance(const std::string& id, const std::string& body);
  Response post_action(const std::string& id, const std::string& body);
  Response post_restatement(const std::string& id, const std::string& body);
  Response get_events(const std::string& id, const std::string& since);
  Response get_metrics(const std::string& id);

  std::size_t session_count() const;

 private:
  struct Entry;
  std::shared_ptr<Entry> find(const std::string& id) const;
  Response with_session(const std::string& id, const std::function<Response(Entry&)>& fn);
  nlohmann::json view(const Entry& e) const;
  nlohmann::json advance(Entry& e);
  void finish(Entry& e);
  std::string new_id();

  ServerOptions options_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t counter_ = 0;
};

/// HTTP front end for Service.
class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();

  /// Blocks until stop().
  bool listen(const std::string& host, int port);
  /// Binds to an ephemeral port and returns it; follow with listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  Service& service() { return service_; }

 private:
  void install_routes();
  Service service_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace mmrec::service
