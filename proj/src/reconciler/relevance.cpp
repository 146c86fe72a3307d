// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/reconciler/relevance.hpp"

#include <algorithm>
#include <set>

namespace mmrec::reconciler {

using context::Category;
using context::Fact;

namespace {

bool in(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

bool relevant(const Fact& f, const std::vector<ActionAtoms>& chain, const std::optional<ActionAtoms>& foil) {
  const bool has_foil = foil && !is_idle(*foil);
  switch (f.category) {
    case Category::Init: {
      const auto atom = f.atom().str();
      if (f.positive()) {
        return std::any_of(chain.begin(), chain.end(), [&](const ActionAtoms& a) { return in(a.pre, atom); });
      }
      return has_foil && in(foil->pre, atom);
    }
    case Category::Goal:
    case Category::Preference: {
      if (!f.positive()) return false;
      const auto atom = f.atom().str();
      return std::any_of(chain.begin(), chain.end(), [&](const ActionAtoms& a) { return in(a.add, atom); });
    }
    case Category::Object:
      if (f.positive()) {
        return std::any_of(chain.begin(), chain.end(), [&](const ActionAtoms& a) { return in(a.args, f.subject); });
      }
      return has_foil && in(foil->args, f.subject);
    case Category::Capability:
      if (f.positive()) return false;
      if (has_foil && foil->agent == f.subject && foil->schema == f.relation) return true;
      return std::any_of(chain.begin(), chain.end(),
                         [&](const ActionAtoms& a) { return a.schema == f.relation && a.agent != f.subject; });
  }
  return false;
}

}  // namespace

int relevance_rank(Category c) {
  switch (c) {
    case Category::Capability: return 0;
    case Category::Goal:
    case Category::Preference: return 1;
    case Category::Init: return 2;
    case Category::Object: return 3;
  }
  return 4;
}

std::vector<ActionAtoms> causal_chain(std::span<const ActionAtoms> trace, std::string_view anchor) {
  std::vector<ActionAtoms> chain;
  std::size_t start = trace.size();
  for (std::size_t i = trace.size(); i-- > 0;) {
    if (trace[i].name == anchor) {
      start = i;
      break;
    }
  }
  if (start == trace.size()) return chain;
  std::set<std::string> produced(trace[start].add.begin(), trace[start].add.end());
  chain.push_back(trace[start]);
  for (std::size_t j = start + 1; j < trace.size(); ++j) {
    const auto& a = trace[j];
    if (std::any_of(a.pre.begin(), a.pre.end(), [&](const std::string& p) { return produced.count(p) != 0; })) {
      chain.push_back(a);
      produced.insert(a.add.begin(), a.add.end());
    }
  }
  return chain;
}

std::vector<Fact> select_relevant(std::span<const Fact> candidates, std::span<const ActionAtoms> trace,
                                  std::string_view anchor, const std::optional<ActionAtoms>& foil) {
  const auto chain = causal_chain(trace, anchor);
  std::vector<Fact> out;
  for (const auto& f : candidates) {
    if (relevant(f, chain, foil)) out.push_back(f);
  }
  std::stable_sort(out.begin(), out.end(), [](const Fact& a, const Fact& b) {
    const int ra = relevance_rank(a.category), rb = relevance_rank(b.category);
    if (ra != rb) return ra < rb;
    return a.key() < b.key();
  });
  return out;
}

}  // namespace mmrec::reconciler
