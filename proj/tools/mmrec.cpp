// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

// mmrec: run, batch, validate and serve reconciliation scenarios.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmrec/context/context_model.hpp"
#include "mmrec/harness/episode.hpp"
#include "mmrec/harness/scenario.hpp"
#include "mmrec/nlu/llm_client.hpp"
#include "mmrec/service/server.hpp"

namespace fs = std::filesystem;
using namespace mmrec;

namespace {

std::shared_ptr<nlu::ChatTransport> transport_for(nlu::NluMode mode) {
  if (mode == nlu::NluMode::Grammar) return nullptr;
  auto cfg = nlu::LlmEndpointConfig::from_env();
  if (cfg.base_url.empty()) return nullptr;
  return std::make_shared<nlu::HttpChatTransport>(cfg);
}

// Expands a simple glob (wildcards in the last path component only).
std::vector<fs::path> expand(const std::string& pattern) {
  const fs::path p(pattern);
  const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  const std::string leaf = p.filename().string();
  if (leaf.find_first_of("*?") == std::string::npos) return {p};
  std::string re;
  for (char c : leaf) {
    if (c == '*') re += ".*";
    else if (c == '?') re += '.';
    else if (std::string("\\^$.|+()[]{}").find(c) != std::string::npos) re += std::string("\\") + c;
    else re += c;
  }
  const std::regex rx(re);
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (std::regex_match(e.path().filename().string(), rx) && fs::exists(e.path() / harness::kManifestName)) {
      out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void summarize(const harness::EpisodeLog& log, double seconds) {
  const auto& last = log.metrics.back();
  std::cout << log.scenario << ": " << harness::to_string(log.outcome) << " t=" << last.iteration
            << " n=" << log.n << " m=" << log.m << " violations=" << log.violations << " ticks=" << log.ticks
            << " ed_r_gt=" << last.fact_ed_r_gt << " ed_h_gt=" << last.fact_ed_h_gt << " d_hr=" << last.d_hr
            << " d_rh=" << last.d_rh << " seconds=" << seconds;
  if (!log.detail.empty() && log.outcome != harness::Outcome::Converged) std::cout << " (" << log.detail << ")";
  std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bi-directional mental-model reconciliation between a planning robot and a human."};
  app.require_subcommand(1);

  std::string scenario_dir, mode = "simulated", nlu_mode = "llm-with-grammar-fallback", out_dir;
  std::uint64_t seed = 0;
  bool tolerate = false;
  auto* run = app.add_subcommand("run", "Run one simulated episode");
  run->add_option("--scenario", scenario_dir, "Scenario directory")->required();
  run->add_option("--mode", mode, "Only 'simulated' runs offline")->check(CLI::IsMember({"simulated"}));
  run->add_option("--nlu", nlu_mode, "grammar | llm | llm-with-grammar-fallback")
      ->check(CLI::IsMember({"grammar", "llm", "llm-with-grammar-fallback"}));
  run->add_option("--seed", seed, "Episode seed");
  run->add_option("--out", out_dir, "Directory for events.jsonl and metrics.csv");
  run->add_flag("--tolerate-reordering", tolerate, "Accept human steps taken out of the expected order");

  std::string pattern;
  int repeats = 1;
  auto* batch = app.add_subcommand("batch", "Run every scenario matching a glob");
  batch->add_option("--scenarios", pattern, "Glob over scenario directories")->required();
  batch->add_option("--repeats", repeats, "Episodes per scenario")->check(CLI::PositiveNumber);
  batch->add_option("--nlu", nlu_mode, "NLU mode")->check(CLI::IsMember({"grammar", "llm", "llm-with-grammar-fallback"}));
  batch->add_option("--seed", seed, "Seed of the first repeat");
  batch->add_option("--out", out_dir, "Directory for per-episode outputs");

  std::string validate_dir;
  auto* validate = app.add_subcommand("validate", "Check a scenario's fixtures and invariants");
  validate->add_option("--scenario", validate_dir, "Scenario directory")->required();

  int port = 8080;
  std::string host = "127.0.0.1", scenarios_root = MMREC_SCENARIO_DIR;
  auto* serve = app.add_subcommand("serve", "Serve live sessions over HTTP");
  serve->add_option("--port", port, "TCP port");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--scenarios", scenarios_root, "Directory holding bundled scenarios");
  serve->add_option("--nlu", nlu_mode, "Default NLU mode for new sessions")
      ->check(CLI::IsMember({"grammar", "llm", "llm-with-grammar-fallback"}));

  CLI11_PARSE(app, argc, argv);

  try {
    const auto nmode = *nlu::parse_nlu_mode(nlu_mode);
    if (*run) {
      const auto scenario = harness::load_scenario(scenario_dir);
      harness::EpisodeOptions opts;
      opts.seed = seed;
      opts.nlu = nmode;
      opts.transport = transport_for(nmode);
      if (tolerate) opts.tolerate_reordering = true;
      const auto t0 = std::chrono::steady_clock::now();
      const auto log = harness::run_episode(scenario, opts);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      summarize(log, secs);
      if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        harness::export_events(log, fs::path(out_dir) / "events.jsonl");
        harness::export_metrics(log, fs::path(out_dir) / "metrics.csv");
      }
      return log.outcome == harness::Outcome::Converged ? 0 : 1;
    }
    if (*batch) {
      const auto dirs = expand(pattern);
      if (dirs.empty()) {
        std::cerr << "no scenarios match " << pattern << '\n';
        return 2;
      }
      bool all = true;
      for (const auto& d : dirs) {
        const auto scenario = harness::load_scenario(d);
        for (int k = 0; k < repeats; ++k) {
          harness::EpisodeOptions opts;
          opts.seed = seed + static_cast<std::uint64_t>(k);
          opts.nlu = nmode;
          opts.transport = transport_for(nmode);
          const auto t0 = std::chrono::steady_clock::now();
          const auto log = harness::run_episode(scenario, opts);
          summarize(log, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
          all = all && log.outcome == harness::Outcome::Converged;
          if (!out_dir.empty()) {
            const fs::path o = fs::path(out_dir) / (scenario.name + "-" + std::to_string(opts.seed));
            fs::create_directories(o);
            harness::export_events(log, o / "events.jsonl");
            harness::export_metrics(log, o / "metrics.csv");
          }
        }
      }
      return all ? 0 : 1;
    }
    if (*validate) {
      try {
        const auto s = harness::load_scenario(validate_dir);
        const auto u = context::union_of(s.robot_facts, s.human_facts);
        std::cout << s.name << ": valid (" << harness::to_string(s.condition) << ", |gt|=" << s.ground_truth.size()
                  << ", |gt \\ r0|=" << context::difference(s.ground_truth, s.robot_facts).size()
                  << ", |gt \\ h0|=" << context::difference(s.ground_truth, s.human_facts).size()
                  << ", ed(r0 u h0, gt)=" << context::edit_distance(u, s.ground_truth) << ")\n";
        return 0;
      } catch (const harness::ScenarioInvalid& e) {
        std::cerr << "invalid scenario: " << e.what() << '\n';
        return 1;
      }
    }
    if (*serve) {
      service::ServerOptions opts;
      opts.scenarios_root = scenarios_root;
      opts.default_nlu = nmode;
      service::Server server(opts);
      std::cout << "listening on http://" << host << ':' << port << '\n' << std::flush;
      return server.listen(host, port) ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
