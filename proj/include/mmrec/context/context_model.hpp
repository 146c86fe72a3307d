// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mmrec/context/fact.hpp"

namespace mmrec::context {

enum class Owner { Robot, Human, GroundTruth };
const char* to_string(Owner o);

/// An immutable fact set. Mutators return a new value; the revision goes up
/// only when the key set actually changes.
class ContextModel {
 public:
  ContextModel() = default;
  explicit ContextModel(Owner owner, std::span<const Fact> facts = {}, int revision = 0);

  Owner owner() const noexcept { return owner_; }
  int revision() const noexcept { return revision_; }
  std::size_t size() const noexcept { return facts_.size(); }
  bool empty() const noexcept { return facts_.empty(); }
  bool contains(const FactKey& key) const { return facts_.count(key) != 0; }
  const Fact* find(const FactKey& key) const;
  const std::map<FactKey, Fact>& facts() const noexcept { return facts_; }
  std::vector<FactKey> keys() const;
  std::vector<Fact> fact_list() const;

  ContextModel add_facts(std::span<const Fact> facts) const;

  friend bool operator==(const ContextModel&, const ContextModel&) = default;

 private:
  Owner owner_ = Owner::Robot;
  int revision_ = 0;
  std::map<FactKey, Fact> facts_;
};

/// |keys(a) Δ keys(b)|: each missing or extra fact costs one edit.
std::size_t edit_distance(const ContextModel& a, const ContextModel& b);

/// Key union; owner is GroundTruth, revision 0.
ContextModel union_of(const ContextModel& a, const ContextModel& b);

/// Facts of `a` whose keys are absent from `b`, in key order.
std::vector<Fact> difference(const ContextModel& a, const ContextModel& b);

}  // namespace mmrec::context
