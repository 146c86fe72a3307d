// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/context/context_model.hpp"

#include <algorithm>

namespace mmrec::context {

const char* to_string(Owner o) {
  switch (o) {
    case Owner::Robot: return "robot";
    case Owner::Human: return "human";
    case Owner::GroundTruth: return "ground_truth";
  }
  return "?";
}

ContextModel::ContextModel(Owner owner, std::span<const Fact> facts, int revision)
    : owner_(owner), revision_(revision) {
  for (const auto& f : facts) {
    Fact c = canonical(f);
    facts_.try_emplace(c.key(), std::move(c));
  }
}

const Fact* ContextModel::find(const FactKey& key) const {
  auto it = facts_.find(key);
  return it == facts_.end() ? nullptr : &it->second;
}

std::vector<FactKey> ContextModel::keys() const {
  std::vector<FactKey> out;
  out.reserve(facts_.size());
  for (const auto& [k, _] : facts_) out.push_back(k);
  return out;
}

std::vector<Fact> ContextModel::fact_list() const {
  std::vector<Fact> out;
  out.reserve(facts_.size());
  for (const auto& [_, f] : facts_) out.push_back(f);
  return out;
}

ContextModel ContextModel::add_facts(std::span<const Fact> facts) const {
  ContextModel next = *this;
  bool changed = false;
  for (const auto& f : facts) {
    Fact c = canonical(f);
    FactKey k = c.key();
    changed |= next.facts_.try_emplace(std::move(k), std::move(c)).second;
  }
  if (changed) ++next.revision_;
  return next;
}

std::size_t edit_distance(const ContextModel& a, const ContextModel& b) {
  std::size_t d = 0;
  auto ia = a.facts().begin();
  auto ib = b.facts().begin();
  while (ia != a.facts().end() && ib != b.facts().end()) {
    if (ia->first < ib->first) {
      ++d;
      ++ia;
    } else if (ib->first < ia->first) {
      ++d;
      ++ib;
    } else {
      ++ia;
      ++ib;
    }
  }
  d += static_cast<std::size_t>(std::distance(ia, a.facts().end()));
  d += static_cast<std::size_t>(std::distance(ib, b.facts().end()));
  return d;
}

ContextModel union_of(const ContextModel& a, const ContextModel& b) {
  std::vector<Fact> all = a.fact_list();
  for (const auto& f : b.fact_list()) all.push_back(f);
  return ContextModel(Owner::GroundTruth, all, 0);
}

std::vector<Fact> difference(const ContextModel& a, const ContextModel& b) {
  std::vector<Fact> out;
  for (const auto& [k, f] : a.facts()) {
    if (!b.contains(k)) out.push_back(f);
  }
  return out;
}

}  // namespace mmrec::context
