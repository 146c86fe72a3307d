// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmrec/pddl/ast.hpp"

namespace mmrec::pddl {

using AtomId = std::uint32_t;
/// Sorted, duplicate-free list of atom indices.
using AtomSet = std::vector<AtomId>;

/// Fixed-universe bitset over a task's atoms.
class WorldState {
 public:
  WorldState() = default;
  explicit WorldState(std::size_t universe);

  std::size_t universe_size() const noexcept { return size_; }
  bool contains(AtomId atom) const;
  bool contains_all(std::span<const AtomId> atoms) const;
  void insert(AtomId atom);
  void erase(AtomId atom);
  std::size_t count() const;
  AtomSet atoms() const;
  std::size_t hash() const noexcept;

  friend bool operator==(const WorldState&, const WorldState&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct WorldStateHash {
  std::size_t operator()(const WorldState& s) const noexcept { return s.hash(); }
};

struct GroundedAction {
  /// `schema(arg1,arg2)`; unique within a task.
  std::string name;
  std::string schema;
  std::vector<std::string> args;
  std::string agent;
  AtomSet pre;
  AtomSet add;
  AtomSet del;
  int cost = 1;

  friend bool operator==(const GroundedAction&, const GroundedAction&) = default;
};

std::string action_name(std::string_view schema, std::span<const std::string> args);

struct GroundedTask {
  /// Canonical atom strings, sorted lexicographically; index = AtomId.
  std::vector<std::string> atoms;
  /// Sorted by name.
  std::vector<GroundedAction> actions;
  WorldState init;
  AtomSet goal;

  std::optional<AtomId> atom_id(std::string_view atom) const;
  std::optional<std::size_t> action_index(std::string_view name) const;
  const GroundedAction* find_action(std::string_view name) const;
  bool goal_satisfied(const WorldState& state) const;
  WorldState make_state(std::span<const std::string> true_atoms) const;

  friend bool operator==(const GroundedTask&, const GroundedTask&) = default;
};

bool applicable(const WorldState& state, const GroundedAction& action);

/// (state \ del) ∪ add. Throws PddlError(PreconditionViolated) when
/// `action.pre` does not hold.
WorldState apply_action(const WorldState& state, const GroundedAction& action);

/// Deterministic text form (used for determinism checks and debugging).
std::string serialize(const GroundedTask& task);

struct GroundingOptions {
  std::size_t max_actions = 200000;
  /// Return false to drop an instantiation (schema, binding in parameter order).
  std::function<bool(const ActionSchema&, std::span<const std::string>)> keep;
};

/// Enumerates every type-consistent instantiation, prunes actions whose
/// preconditions are unreachable under delete relaxation, and orders atoms
/// and actions lexicographically.
GroundedTask ground_task(const Domain& domain, const Problem& problem, const GroundingOptions& options = {});

}  // namespace mmrec::pddl
