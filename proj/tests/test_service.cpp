// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <httplib.h>
#include <unistd.h>

#include <atomic>
#include <json.hpp>
#include <thread>

#include "mmrec/context/fact_io.hpp"
#include "mmrec/nlu/grammar.hpp"
#include "mmrec/service/server.hpp"
#include "support/fixtures.hpp"

using namespace mmrec;
using namespace mmrec::service;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

ServerOptions options() {
  ServerOptions o;
  o.scenarios_root = oracle::scenario_dir();
  o.default_nlu = nlu::NluMode::Grammar;
  return o;
}

json body(const Response& r) { return json::parse(r.body); }

std::string create(Service& svc, const std::string& scenario) {
  const auto r = svc.create_session(json{{"scenario", scenario}}.dump());
  if (r.status != 201) throw std::runtime_error(r.body);
  return body(r)["id"];
}

std::string text(const std::string& t) { return json{{"text", t}}.dump(); }
std::string action(const std::string& a) { return json{{"action", a}}.dump(); }

std::string restate(const json& explanation) {
  std::vector<context::Fact> facts;
  for (const auto& f : explanation["facts"]) facts.push_back(f.get<context::Fact>());
  return nlu::render_facts_utterance(facts, nlu::Attribution::MissingFromHuman);
}

// Asks about the robot's next planned step and returns the reply body.
json ask_why(Service& svc, const std::string& id) {
  const auto st = body(svc.get_state(id));
  const std::string asked = st["robot_plan"].empty() ? "none" : st["robot_plan"][0].get<std::string>();
  const auto r = svc.post_utterance(id, text("why: " + asked + " instead-of: none"));
  EXPECT_EQ(r.status, 200) << r.body;
  return body(r);
}

}  // namespace

TEST(ServiceSessions, CreateReturnsInitialView) {
  Service svc(options());
  const auto r = svc.create_session(R"({"scenario":"dinner-robot-incomplete"})");
  ASSERT_EQ(r.status, 201) << r.body;
  const auto j = body(r);
  EXPECT_EQ(j["scenario"], "dinner-robot-incomplete");
  EXPECT_EQ(j["mode"], "live");
  EXPECT_EQ(j["phase"], "executing");
  EXPECT_EQ(j["t"], 0);
  EXPECT_FALSE(j["expected_human_plan"].empty());
  EXPECT_TRUE(j["robot_actions"].is_array());
  EXPECT_TRUE(j["available_actions"].is_array());
  EXPECT_EQ(j["explanations"]["n"], 0);
  EXPECT_EQ(svc.session_count(), 1u);
}

TEST(ServiceSessions, DistinctIds) {
  Service svc(options());
  EXPECT_NE(create(svc, "dinner-both-incomplete"), create(svc, "dinner-both-incomplete"));
  EXPECT_EQ(svc.session_count(), 2u);
}

TEST(ServiceSessions, CreateErrors) {
  Service svc(options());
  EXPECT_EQ(svc.create_session("not json").status, 422);
  EXPECT_EQ(svc.create_session(R"({"nlu":"grammar"})").status, 422);
  EXPECT_EQ(svc.create_session(R"({"scenario":"nope"})").status, 404);
  EXPECT_EQ(svc.create_session(R"({"scenario":"../scenarios/dinner-both-incomplete"})").status, 404);
  EXPECT_EQ(svc.create_session(R"({"scenario":"dinner-both-incomplete","nlu":"telepathy"})").status, 422);
  EXPECT_EQ(svc.session_count(), 0u);
}

TEST(ServiceSessions, UnknownSessionIs404) {
  Service svc(options());
  EXPECT_EQ(svc.get_state("missing").status, 404);
  EXPECT_EQ(svc.post_action("missing", action("set_table(human)")).status, 404);
  EXPECT_EQ(svc.post_utterance("missing", text("hi")).status, 404);
  EXPECT_EQ(svc.post_restatement("missing", text("hi")).status, 404);
  EXPECT_EQ(svc.get_events("missing", "").status, 404);
  EXPECT_EQ(svc.get_metrics("missing").status, 404);
}

TEST(ServiceSessions, GroundTruthStaysHidden) {
  Service svc(options());
  const auto r = svc.create_session(R"({"scenario":"dinner-robot-incomplete"})");
  EXPECT_EQ(r.body.find("vegetarian"), std::string::npos);
  EXPECT_EQ(r.body.find("ground_truth"), std::string::npos);
  const auto id = body(r)["id"].get<std::string>();
  EXPECT_EQ(svc.get_state(id).body.find("vegetarian"), std::string::npos);
}

TEST(ServiceActions, ExpectedActionIsAccepted) {
  Service svc(options());
  const auto id = create(svc, "dinner-neither-incomplete");
  const auto expected = body(svc.get_state(id))["expected_human_plan"][0].get<std::string>();
  const auto r = svc.post_action(id, action(expected));
  ASSERT_EQ(r.status, 200) << r.body;
  const auto j = body(r);
  EXPECT_TRUE(j["applied"]);
  EXPECT_FALSE(j.contains("violation"));
  EXPECT_FALSE(j.contains("interruption"));
  EXPECT_EQ(j["phase"], "executing");
}

TEST(ServiceActions, DeviationInterruptsWithBothNames) {
  Service svc(options());
  const auto id = create(svc, "dinner-robot-incomplete");
  const auto expected = body(svc.get_state(id))["expected_human_plan"][0].get<std::string>();
  ASSERT_EQ(expected, "pick_dish(human,steak)");
  const auto j = body(svc.post_action(id, action("pick_dish(human,tofu_curry)")));
  ASSERT_TRUE(j.contains("interruption"));
  const std::string msg = j["interruption"];
  EXPECT_NE(msg.find("pick_dish(human,steak)"), std::string::npos);
  EXPECT_NE(msg.find("pick_dish(human,tofu_curry)"), std::string::npos);
  EXPECT_EQ(j["violation"]["expected"], "pick_dish(human,steak)");
  EXPECT_EQ(j["phase"], "awaiting_clarification");
  EXPECT_EQ(svc.post_action(id, action("set_table(human)")).status, 409);
  EXPECT_TRUE(body(svc.get_state(id))["available_actions"].empty());
}

TEST(ServiceActions, MalformedActionIs422) {
  Service svc(options());
  const auto id = create(svc, "dinner-neither-incomplete");
  EXPECT_EQ(svc.post_action(id, R"({"act":"x"})").status, 422);
  EXPECT_EQ(svc.post_action(id, action("fly(human)")).status, 422);
  EXPECT_EQ(svc.post_action(id, action("cook(robot,steak)")).status, 422);
  EXPECT_EQ(body(svc.get_state(id))["phase"], "executing");
}

TEST(ServiceUtterances, StructuredFactReplansRobot) {
  Service svc(options());
  const auto id = create(svc, "dinner-robot-incomplete");
  svc.post_action(id, action("pick_dish(human,tofu_curry)"));
  const auto r = svc.post_utterance(
      id, text("fact: init alice vegetarian + missing-from: robot; fact: preference alice served_veg + missing-from: robot"));
  ASSERT_EQ(r.status, 200) << r.body;
  const auto j = body(r);
  EXPECT_TRUE(j["understood"]);
  EXPECT_TRUE(j["model_changed"]);
  EXPECT_EQ(j["attribution"], "missing_from_robot");
  EXPECT_EQ(j["phase"], "executing");
  ASSERT_TRUE(j.contains("explanation"));
  EXPECT_EQ(j["explanation"]["direction"], "human_to_robot");
  EXPECT_NE(j.dump().find("cook(robot,tofu_curry)"), std::string::npos) << j.dump();
  EXPECT_EQ(body(svc.get_state(id))["explanations"]["m"], 1);
}

TEST(ServiceUtterances, SmallTalkChangesNothing) {
  Service svc(options());
  const auto id = create(svc, "dinner-robot-incomplete");
  const auto before = body(svc.get_state(id));
  const auto j = body(svc.post_utterance(id, text("nice weather today")));
  EXPECT_FALSE(j["model_changed"]);
  EXPECT_EQ(j["attribution"], "no_new_information");
  EXPECT_EQ(j["robot_plan"], before["robot_plan"]);
  EXPECT_EQ(body(svc.get_state(id))["t"], 0);
}

TEST(ServiceUtterances, MissingTextIs422) {
  Service svc(options());
  const auto id = create(svc, "dinner-robot-incomplete");
  EXPECT_EQ(svc.post_utterance(id, "{}").status, 422);
  EXPECT_EQ(svc.post_utterance(id, R"({"text":5})").status, 422);
}

TEST(ServiceRestatement, GateBlocksUntilMatched) {
  Service svc(options());
  const auto id = create(svc, "dinner-human-incomplete");
  EXPECT_EQ(svc.post_restatement(id, text("x")).status, 409);
  const auto q = ask_why(svc, id);
  ASSERT_TRUE(q.contains("explanation")) << q.dump();
  EXPECT_EQ(q["phase"], "awaiting_restatement");
  // Nothing else gets through while the explanation is pending.
  EXPECT_EQ(svc.post_action(id, action("set_table(human)")).status, 409);
  EXPECT_EQ(svc.post_utterance(id, text("ok")).status, 409);
  EXPECT_TRUE(body(svc.get_state(id)).contains("pending_explanation"));

  const auto miss = body(svc.post_restatement(id, text("")));
  EXPECT_FALSE(miss["matched"]);
  EXPECT_FALSE(miss["unresolved"]);
  EXPECT_FALSE(miss["missing"].empty());
  EXPECT_EQ(miss["phase"], "awaiting_restatement");

  const auto hit = body(svc.post_restatement(id, text(restate(q["explanation"]))));
  EXPECT_TRUE(hit["matched"]);
  EXPECT_EQ(hit["reply"], "Thank you, we are on the same page.");
  EXPECT_NE(hit["phase"], "awaiting_restatement");
  const auto st = body(svc.get_state(id));
  EXPECT_EQ(st["explanations"]["n"], 1);
  EXPECT_EQ(st["fact_panel"].size(), q["explanation"]["facts"].size());
  EXPECT_EQ(st["t"], 1);
}

TEST(ServiceRestatement, ThirdMissIsUnresolved) {
  Service svc(options());
  const auto id = create(svc, "dinner-human-incomplete");
  ask_why(svc, id);
  EXPECT_FALSE(body(svc.post_restatement(id, text("")))["unresolved"]);
  EXPECT_FALSE(body(svc.post_restatement(id, text("")))["unresolved"]);
  const auto last = body(svc.post_restatement(id, text("")));
  EXPECT_TRUE(last["unresolved"]);
  EXPECT_EQ(last["phase"], "executing");
  EXPECT_EQ(body(svc.get_state(id))["explanations"]["n"], 0);
}

TEST(ServiceEvents, DeltaSinceTick) {
  Service svc(options());
  const auto id = create(svc, "dinner-robot-incomplete");
  const auto all = body(svc.get_events(id, ""));
  ASSERT_FALSE(all["events"].empty());
  const auto tick = all["tick"].get<std::uint64_t>();
  EXPECT_EQ(all["events"].back()["tick"], tick);
  EXPECT_TRUE(body(svc.get_events(id, std::to_string(tick)))["events"].empty());

  svc.post_action(id, action("pick_dish(human,tofu_curry)"));
  svc.post_utterance(id, text("fact: init alice vegetarian + missing-from: robot"));
  std::set<std::string> kinds;
  const auto delta = body(svc.get_events(id, std::to_string(tick)));
  for (const auto& e : delta["events"]) {
    EXPECT_GT(e["tick"].get<std::uint64_t>(), tick);
    kinds.insert(e["kind"].get<std::string>());
  }
  EXPECT_TRUE(kinds.count("extraction"));
  EXPECT_TRUE(kinds.count("explanation"));
  EXPECT_TRUE(kinds.count("violation"));
  EXPECT_EQ(svc.get_events(id, "abc").status, 422);
  EXPECT_EQ(svc.get_events(id, "-1").status, 422);
}

TEST(ServiceMetrics, CsvWithTickHeader) {
  Service svc(options());
  const auto id = create(svc, "dinner-robot-incomplete");
  const auto r = svc.get_metrics(id);
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.content_type, "text/csv");
  EXPECT_EQ(r.body.rfind("t,d_hr,d_rh,ed_r_gt,ed_h_gt,ed_r_h\n0,", 0), 0u) << r.body;
  ASSERT_TRUE(r.headers.count("X-Session-Tick"));
  EXPECT_EQ(r.headers.at("X-Session-Tick"), std::to_string(body(svc.get_state(id))["tick"].get<std::uint64_t>()));
}

TEST(ServiceLive, HumanFollowingPlanConvergesAndWritesLog) {
  auto opts = options();
  const auto dir = fs::temp_directory_path() / ("mmrec-svc-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  opts.log_dir = dir;
  Service svc(opts);
  const auto id = create(svc, "dinner-neither-incomplete");
  for (int i = 0; i < 20; ++i) {
    const auto st = body(svc.get_state(id));
    if (st["phase"] == "terminated") break;
    ASSERT_FALSE(st["pending_human"].empty()) << st.dump();
    const auto r = body(svc.post_action(id, action(st["pending_human"][0])));
    ASSERT_FALSE(r.contains("violation")) << r.dump();
  }
  const auto st = body(svc.get_state(id));
  EXPECT_EQ(st["phase"], "terminated");
  EXPECT_EQ(st["termination"], "converged");
  EXPECT_TRUE(fs::exists(dir / (id + ".jsonl")));
  EXPECT_EQ(svc.post_utterance(id, text("hello")).status, 409);
  EXPECT_EQ(svc.post_action(id, action("set_table(human)")).status, 409);
  fs::remove_all(dir);
}

TEST(TicketLockOrder, ServesInTicketOrder) {
  TicketLock lock;
  std::vector<int> order;
  std::mutex m;
  const auto t0 = lock.take(), t1 = lock.take(), t2 = lock.take();
  auto worker = [&](std::uint64_t t, int tag) {
    lock.wait(t);
    {
      std::lock_guard g(m);
      order.push_back(tag);
    }
    lock.release();
  };
  std::thread c(worker, t2, 2), b(worker, t1, 1);
  std::this_thread::sleep_for(std::chrono::milliseconds(20));
  std::thread a(worker, t0, 0);
  a.join();
  b.join();
  c.join();
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2}));
}

TEST(Http, RoutesOverLoopback) {
  Server server(options());
  const int port = server.bind_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread th([&] { server.listen_after_bind(); });
  httplib::Client cli("127.0.0.1", port);
  cli.set_connection_timeout(5);

  auto created = cli.Post("/sessions", R"({"scenario":"dinner-robot-incomplete"})", "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const std::string id = json::parse(created->body)["id"];

  auto state = cli.Get("/sessions/" + id);
  ASSERT_TRUE(state);
  EXPECT_EQ(state->status, 200);
  EXPECT_EQ(json::parse(state->body)["id"], id);

  auto act = cli.Post("/sessions/" + id + "/action", action("pick_dish(human,tofu_curry)"), "application/json");
  ASSERT_TRUE(act);
  EXPECT_TRUE(json::parse(act->body).contains("interruption"));

  auto utt = cli.Post("/sessions/" + id + "/utterance", text("fact: init alice vegetarian + missing-from: robot"),
                      "application/json");
  ASSERT_TRUE(utt);
  EXPECT_TRUE(json::parse(utt->body)["model_changed"]);

  auto rest = cli.Post("/sessions/" + id + "/restatement", text("x"), "application/json");
  ASSERT_TRUE(rest);
  EXPECT_EQ(rest->status, 409);

  auto ev = cli.Get("/sessions/" + id + "/events?since=1");
  ASSERT_TRUE(ev);
  EXPECT_EQ(json::parse(ev->body)["events"][0]["tick"], 2);

  auto metrics = cli.Get("/sessions/" + id + "/metrics");
  ASSERT_TRUE(metrics);
  EXPECT_EQ(metrics->get_header_value("Content-Type"), "text/csv");
  EXPECT_FALSE(metrics->get_header_value("X-Session-Tick").empty());

  auto missing = cli.Get("/sessions/nope");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);

  server.stop();
  th.join();
}
