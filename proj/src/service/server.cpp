// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/service/server.hpp"

#include <httplib.h>

#include <cctype>
#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include "mmrec/context/fact_io.hpp"
#include "mmrec/divergence/divergence.hpp"
#include "mmrec/harness/scenario.hpp"
#include "mmrec/reconciler/session.hpp"

namespace mmrec::service {

namespace fs = std::filesystem;
using nlohmann::json;
using reconciler::Phase;
using reconciler::Session;

std::uint64_t TicketLock::take() {
  std::lock_guard lock(mutex_);
  return next_++;
}

void TicketLock::wait(std::uint64_t ticket) {
  std::unique_lock lock(mutex_);
  cv_.wait(lock, [&] { return serving_ == ticket; });
}

void TicketLock::release() {
  {
    std::lock_guard lock(mutex_);
    ++serving_;
  }
  cv_.notify_all();
}

struct Service::Entry {
  std::string id;
  std::string scenario;
  std::string created_at;
  std::unique_ptr<Session> session;
  TicketLock lock;
  bool flushed = false;
};

namespace {

Response json_response(int status, const json& body) { return Response{status, body.dump(), "application/json", {}}; }

Response error(int status, const std::string& message, std::optional<std::uint64_t> tick = std::nullopt) {
  json body{{"error", message}};
  if (tick) body["tick"] = *tick;
  return json_response(status, body);
}

std::optional<json> parse_body(const std::string& body) {
  try {
    auto j = json::parse(body);
    if (!j.is_object()) return std::nullopt;
    return j;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

std::string iso_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool safe_name(const std::string& s) {
  if (s.empty() || s.size() > 128) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_'; });
}

json utterance_json(const nlu::Utterance& u) {
  return {{"speaker", nlu::to_string(u.speaker)}, {"text", u.text}, {"tick", u.timestamp}};
}

json names_of(const std::vector<reconciler::ActionAtoms>& steps, const std::string& agent) {
  json out = json::array();
  for (const auto& s : steps) {
    if (s.agent == agent) out.push_back(s.name);
  }
  return out;
}

}  // namespace

Service::Service(ServerOptions options) : options_(std::move(options)) {}
Service::~Service() = default;

std::size_t Service::session_count() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

std::string Service::new_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::ostringstream id;
  id << std::hex << rng() << '-' << std::dec << ++counter_;
  return id.str();
}

std::shared_ptr<Service::Entry> Service::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Response Service::with_session(const std::string& id, const std::function<Response(Entry&)>& fn) {
  auto entry = find(id);
  if (!entry) return error(404, "unknown session '" + id + "'");
  const auto ticket = entry->lock.take();
  entry->lock.wait(ticket);
  Response r;
  try {
    r = fn(*entry);
  } catch (const reconciler::PhaseError& e) {
    r = error(409, e.what(), entry->session->tick());
  } catch (const std::exception& e) {
    r = error(500, e.what(), entry->session->tick());
  }
  entry->lock.release();
  return r;
}

json Service::view(const Entry& e) const {
  const Session& s = *e.session;
  const auto& cfg = s.config();
  json told = json::array();
  for (const auto& f : s.told_to_human()) told.push_back(f);
  json transcript = json::array();
  for (const auto& u : s.transcript()) transcript.push_back(utterance_json(u));
  json executed = json::array();
  for (const auto& ev : s.events()) {
    if (ev.kind == "robot_action" || (ev.kind == "human_action" && ev.payload.value("applied", false))) {
      executed.push_back({{"tick", ev.tick}, {"agent", ev.kind == "robot_action" ? cfg.robot_agent : cfg.human_agent},
                          {"action", ev.payload["action"]}});
    }
  }
  const auto pending = s.pending_steps();
  json v{{"id", e.id},
         {"scenario", e.scenario},
         {"mode", "live"},
         {"created_at", e.created_at},
         {"tick", s.tick()},
         {"t", s.iteration()},
         {"phase", reconciler::to_string(s.phase())},
         {"termination", reconciler::to_string(s.termination())},
         {"robot_plan", s.plans().robot_projection.names()},
         {"expected_human_plan", s.plans().human_projection.names()},
         {"pending_robot", names_of(pending, cfg.robot_agent)},
         {"pending_human", names_of(pending, cfg.human_agent)},
         {"available_actions", s.phase() == Phase::Executing ? json(s.available_human_actions()) : json::array()},
         {"executed", executed},
         {"fact_panel", told},
         {"transcript", transcript},
         {"explanations", {{"n", s.explanations().n()}, {"m", s.explanations().m()}}}};
  if (s.pending_explanation()) v["pending_explanation"] = s.pending_explanation()->text;
  return v;
}

json Service::advance(Entry& e) {
  Session& s = *e.session;
  json actions = json::array();
  for (int i = 0; i < options_.max_robot_steps && s.phase() == Phase::Executing; ++i) {
    if (s.check_termination()) break;
    const auto r = s.robot_step();
    if (!r.executed) break;
    actions.push_back(r.executed->name);
  }
  s.check_termination();
  finish(e);
  return actions;
}

void Service::finish(Entry& e) {
  if (e.flushed || e.session->phase() != Phase::Terminated || !options_.log_dir) return;
  fs::create_directories(*options_.log_dir);
  std::ofstream out(*options_.log_dir / (e.id + ".jsonl"), std::ios::binary);
  out << reconciler::to_json_lines(e.session->events());
  e.flushed = true;
}

Response Service::create_session(const std::string& body) {
  const auto j = parse_body(body);
  if (!j) return error(422, "body must be a JSON object");
  if (!j->contains("scenario") || !(*j)["scenario"].is_string()) return error(422, "missing string 'scenario'");
  const std::string name = (*j)["scenario"].get<std::string>();
  nlu::NluMode mode = options_.default_nlu;
  if (j->contains("nlu")) {
    if (!(*j)["nlu"].is_string()) return error(422, "'nlu' must be a string");
    auto m = nlu::parse_nlu_mode((*j)["nlu"].get<std::string>());
    if (!m) return error(422, "invalid nlu mode '" + (*j)["nlu"].get<std::string>() + "'");
    mode = *m;
  }
  const fs::path dir = options_.scenarios_root / name;
  if (!safe_name(name) || !fs::exists(dir / harness::kManifestName)) return error(404, "unknown scenario '" + name + "'");
  harness::Scenario scenario;
  try {
    scenario = harness::load_scenario(dir);
  } catch (const harness::ScenarioInvalid& ex) {
    return error(422, ex.what());
  }
  reconciler::SessionConfig cfg;
  cfg.mode = reconciler::Mode::Live;
  cfg.nlu = mode;
  cfg.epsilon = scenario.epsilon;
  cfg.tolerate_reordering = j->value("tolerate_reordering", scenario.tolerate_reordering);
  cfg.robot_agent = scenario.robot_agent;
  cfg.human_agent = scenario.human_agent;
  cfg.label = scenario.name;
  std::shared_ptr<nlu::ChatTransport> transport;
  if (mode != nlu::NluMode::Grammar && options_.transport_factory) transport = options_.transport_factory();

  auto entry = std::make_shared<Entry>();
  entry->scenario = scenario.name;
  entry->created_at = iso_now();
  entry->session = std::make_unique<Session>(
      reconciler::SessionInputs{scenario.domain, scenario.problem, scenario.robot_facts, scenario.initial_world()}, cfg,
      transport);
  // Ground truth feeds only the fact-distance columns of the metrics.
  entry->session->set_metrics_probe(nullptr, scenario.ground_truth);
  entry->session->start();
  {
    std::unique_lock lock(sessions_mutex_);
    entry->id = new_id();
    sessions_.emplace(entry->id, entry);
  }
  json robot_actions;
  {
    const auto ticket = entry->lock.take();
    entry->lock.wait(ticket);
    robot_actions = advance(*entry);
    entry->lock.release();
  }
  json out = view(*entry);
  out["robot_actions"] = robot_actions;
  return json_response(201, out);
}

Response Service::get_state(const std::string& id) {
  return with_session(id, [&](Entry& e) { return json_response(200, view(e)); });
}

Response Service::post_utterance(const std::string& id, const std::string& body) {
  return with_session(id, [&](Entry& e) {
    Session& s = *e.session;
    const auto j = parse_body(body);
    if (!j || !j->contains("text") || !(*j)["text"].is_string()) return error(422, "missing string 'text'", s.tick());
    if (s.phase() != Phase::Executing && s.phase() != Phase::AwaitingClarification) {
      return error(409, std::string("utterances are not accepted in phase ") + reconciler::to_string(s.phase()),
                   s.tick());
    }
    const auto r = s.handle_human_utterance(nlu::Utterance{nlu::Speaker::Human, (*j)["text"].get<std::string>(), s.tick()});
    json out{{"reply", r.reply.text},
             {"understood", r.understood},
             {"model_changed", r.model_changed},
             {"attribution", nlu::to_string(r.extraction.attribution)}};
    if (r.explanation) out["explanation"] = reconciler::to_json(*r.explanation);
    out["robot_actions"] = advance(e);
    out["phase"] = reconciler::to_string(s.phase());
    out["robot_plan"] = s.plans().robot_projection.names();
    out["expected_human_plan"] = s.plans().human_projection.names();
    out["tick"] = s.tick();
    return json_response(200, out);
  });
}

Response Service::post_action(const std::string& id, const std::string& body) {
  return with_session(id, [&](Entry& e) {
    Session& s = *e.session;
    const auto j = parse_body(body);
    if (!j || !j->contains("action") || !(*j)["action"].is_string()) {
      return error(422, "missing string 'action'", s.tick());
    }
    if (s.phase() != Phase::Executing) {
      return error(409, std::string("actions are not accepted in phase ") + reconciler::to_string(s.phase()), s.tick());
    }
    reconciler::ObservationResult r;
    try {
      r = s.observe_human_action((*j)["action"].get<std::string>());
    } catch (const reconciler::UnknownActionError& ex) {
      return error(422, ex.what(), s.tick());
    }
    json out{{"applied", r.applied}};
    if (r.violation) out["violation"] = reconciler::to_json(*r.violation);
    if (r.interruption) out["interruption"] = r.interruption->text;
    out["robot_actions"] = advance(e);
    out["phase"] = reconciler::to_string(s.phase());
    out["tick"] = s.tick();
    return json_response(200, out);
  });
}

Response Service::post_restatement(const std::string& id, const std::string& body) {
  return with_session(id, [&](Entry& e) {
    Session& s = *e.session;
    const auto j = parse_body(body);
    if (!j || !j->contains("text") || !(*j)["text"].is_string()) return error(422, "missing string 'text'", s.tick());
    if (s.phase() != Phase::AwaitingRestatement) {
      return error(409, std::string("restatements are not accepted in phase ") + reconciler::to_string(s.phase()),
                   s.tick());
    }
    const auto r = s.confirm_restatement(nlu::Utterance{nlu::Speaker::Human, (*j)["text"].get<std::string>(), s.tick()});
    json missing = json::array();
    for (const auto& k : r.missing) missing.push_back(k.value);
    json out{{"matched", r.matched}, {"unresolved", r.unresolved}, {"missing", missing}};
    if (r.reply) out["reply"] = r.reply->text;
    out["robot_actions"] = advance(e);
    out["phase"] = reconciler::to_string(s.phase());
    out["tick"] = s.tick();
    return json_response(200, out);
  });
}

Response Service::get_events(const std::string& id, const std::string& since) {
  return with_session(id, [&](Entry& e) {
    std::uint64_t from = 0;
    if (!since.empty()) {
      try {
        std::size_t used = 0;
        if (!std::isdigit(static_cast<unsigned char>(since.front()))) throw std::invalid_argument(since);
        from = std::stoull(since, &used);
        if (used != since.size()) throw std::invalid_argument(since);
      } catch (const std::exception&) {
        return error(422, "'since' must be a non-negative integer", e.session->tick());
      }
    }
    json events = json::array();
    for (const auto& ev : e.session->events_since(from)) {
      events.push_back({{"tick", ev.tick}, {"kind", ev.kind}, {"payload", ev.payload}});
    }
    return json_response(200, {{"tick", e.session->tick()}, {"events", events}});
  });
}

Response Service::get_metrics(const std::string& id) {
  return with_session(id, [&](Entry& e) {
    // A CSV body has no room for the tick, so it travels in a header.
    return Response{200, divergence::to_csv(e.session->metrics()), "text/csv",
                    {{"X-Session-Tick", std::to_string(e.session->tick())}}};
  });
}

Server::Server(ServerOptions options) : service_(std::move(options)), http_(std::make_unique<httplib::Server>()) {
  install_routes();
}

Server::~Server() { stop(); }

void Server::install_routes() {
  auto send = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
    for (const auto& [k, v] : r.headers) res.set_header(k, v);
  };
  http_->Post("/sessions", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.create_session(req.body));
  });
  http_->Get(R"(/sessions/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.get_state(req.matches[1]));
  });
  http_->Post(R"(/sessions/([^/]+)/utterance)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.post_utterance(req.matches[1], req.body));
  });
  http_->Post(R"(/sessions/([^/]+)/action)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.post_action(req.matches[1], req.body));
  });
  http_->Post(R"(/sessions/([^/]+)/restatement)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.post_restatement(req.matches[1], req.body));
  });
  http_->Get(R"(/sessions/([^/]+)/events)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.get_events(req.matches[1], req.has_param("since") ? req.get_param_value("since") : ""));
  });
  http_->Get(R"(/sessions/([^/]+)/metrics)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.get_metrics(req.matches[1]));
  });
}

bool Server::listen(const std::string& host, int port) { return http_->listen(host, port); }

int Server::bind_any_port(const std::string& host) { return http_->bind_to_any_port(host); }

bool Server::listen_after_bind() { return http_->listen_after_bind(); }

void Server::stop() {
  if (http_ && http_->is_running()) http_->stop();
}

}  // namespace mmrec::service
