// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/harness/episode.hpp"

#include <fstream>

#include "mmrec/reconciler/session.hpp"
#include "mmrec/sim/simulated_human.hpp"

namespace mmrec::harness {

using reconciler::Phase;

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Converged: return "converged";
    case Outcome::Unresolved: return "unresolved";
    case Outcome::Error: return "error";
  }
  return "?";
}

std::string EpisodeLog::event_lines() const { return reconciler::to_json_lines(events); }

EpisodeLog run_episode(const Scenario& scenario, const EpisodeOptions& options) {
  reconciler::SessionConfig config;
  config.mode = reconciler::Mode::Simulated;
  config.nlu = options.nlu;
  config.seed = options.seed;
  config.epsilon = scenario.epsilon;
  config.tolerate_reordering = options.tolerate_reordering.value_or(scenario.tolerate_reordering);
  config.robot_agent = scenario.robot_agent;
  config.human_agent = scenario.human_agent;
  config.label = scenario.name;

  reconciler::Session session(
      reconciler::SessionInputs{scenario.domain, scenario.problem, scenario.robot_facts, scenario.initial_world()},
      config, options.transport);
  sim::SimulatedHuman human(scenario.domain, scenario.problem, scenario.human_facts, scenario.human_agent,
                            scenario.robot_agent);
  session.set_metrics_probe([&human] { return reconciler::HumanView{human.ctx(), human.initial_plan()}; },
                            scenario.ground_truth);

  EpisodeLog log;
  log.scenario = scenario.name;
  try {
    session.start();
    human.replan(session.world());
    auto epoch = session.world_epoch();
    auto after_dialogue = [&](int t_before) {
      if (session.phase() == Phase::Executing) human.resume(session.world(), session.iteration() != t_before);
    };
    for (; log.ticks < options.max_ticks; ++log.ticks) {
      if (session.check_termination()) break;
      if (session.world_epoch() != epoch) {
        epoch = session.world_epoch();
        human.reset(session.world());
      }
      const int t_before = session.iteration();
      switch (session.phase()) {
        case Phase::Executing: {
          const auto step = session.robot_step();
          if (session.phase() != Phase::Executing) break;
          const auto seen = step.executed ? *step.executed : reconciler::idle_action(scenario.robot_agent);
          if (auto u = human.maybe_interrupt(seen, session.world())) {
            session.handle_human_utterance(*u);
            after_dialogue(t_before);
            break;
          }
          const auto action = human.next_action(session.world());
          const auto obs = session.observe_human_action(action.value_or(reconciler::idle_action(scenario.human_agent)));
          if (!step.executed && !obs.applied && session.phase() == Phase::Executing) session.notify_stall();
          break;
        }
        case Phase::AwaitingClarification:
          session.handle_human_utterance(human.respond(*session.open_violation()));
          after_dialogue(t_before);
          break;
        case Phase::AwaitingRestatement:
          session.confirm_restatement(human.receive_explanation(*session.pending_explanation()));
          after_dialogue(t_before);
          break;
        case Phase::Terminated: break;
      }
    }
    if (session.phase() != Phase::Terminated) {
      session.terminate(reconciler::TerminationReason::Unresolved, "tick budget exhausted");
    }
  } catch (const std::exception& e) {
    session.terminate(reconciler::TerminationReason::Error, e.what());
  }

  switch (session.termination()) {
    case reconciler::TerminationReason::Converged: log.outcome = Outcome::Converged; break;
    case reconciler::TerminationReason::Unresolved: log.outcome = Outcome::Unresolved; break;
    default: log.outcome = Outcome::Error; break;
  }
  log.detail = session.events().back().payload.value("detail", "");
  log.events = session.events();
  log.metrics = session.metrics();
  log.n = session.explanations().n();
  log.m = session.explanations().m();
  log.violations = session.violation_count();
  log.triggers = session.trigger_count();
  log.explanations = session.explanations().entries();
  log.final_robot_ctx = session.robot_ctx();
  log.final_human_ctx = human.ctx();
  return log;
}

void export_metrics(const EpisodeLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << divergence::to_csv(log.metrics);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void export_events(const EpisodeLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << log.event_lines();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace mmrec::harness
