// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "mmrec/divergence/divergence.hpp"
#include "mmrec/harness/scenario.hpp"
#include "mmrec/nlu/extractor.hpp"
#include "mmrec/reconciler/types.hpp"

namespace mmrec::harness {

enum class Outcome { Converged, Unresolved, Error };
const char* to_string(Outcome o);

struct EpisodeOptions {
  std::uint64_t seed = 0;
  nlu::NluMode nlu = nlu::NluMode::Grammar;
  std::shared_ptr<nlu::ChatTransport> transport;
  std::size_t max_ticks = 10000;
  std::optional<bool> tolerate_reordering;  // overrides the scenario flag
};

struct EpisodeLog {
  std::string scenario;
  std::vector<reconciler::Event> events;
  std::vector<divergence::DivergenceReport> metrics;
  Outcome outcome = Outcome::Error;
  std::string detail;
  std::size_t ticks = 0;
  std::size_t n = 0;  // robot-to-human explanations
  std::size_t m = 0;  // human-to-robot explanations
  std::size_t violations = 0;
  std::size_t triggers = 0;
  std::vector<reconciler::Explanation> explanations;
  context::ContextModel final_robot_ctx;
  context::ContextModel final_human_ctx;

  std::string event_lines() const;
};

EpisodeLog run_episode(const Scenario& scenario, const EpisodeOptions& options = {});

/// CSV `t,d_hr,d_rh,ed_r_gt,ed_h_gt,ed_r_h`, one row per iteration.
void export_metrics(const EpisodeLog& log, const std::filesystem::path& path);
void export_events(const EpisodeLog& log, const std::filesystem::path& path);

}  // namespace mmrec::harness
