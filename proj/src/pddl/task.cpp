// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/pddl/task.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

#include "mmrec/pddl/error.hpp"

namespace mmrec::pddl {

WorldState::WorldState(std::size_t universe) : size_(universe), words_((universe + 63) / 64, 0) {}

bool WorldState::contains(AtomId atom) const {
  if (atom >= size_) return false;
  return (words_[atom / 64] >> (atom % 64)) & 1U;
}

bool WorldState::contains_all(std::span<const AtomId> atoms) const {
  return std::all_of(atoms.begin(), atoms.end(), [this](AtomId a) { return contains(a); });
}

void WorldState::insert(AtomId atom) {
  if (atom >= size_) throw std::out_of_range("atom outside state universe");
  words_[atom / 64] |= std::uint64_t{1} << (atom % 64);
}

void WorldState::erase(AtomId atom) {
  if (atom >= size_) return;
  words_[atom / 64] &= ~(std::uint64_t{1} << (atom % 64));
}

std::size_t WorldState::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

AtomSet WorldState::atoms() const {
  AtomSet out;
  for (AtomId a = 0; a < size_; ++a) {
    if (contains(a)) out.push_back(a);
  }
  return out;
}

std::size_t WorldState::hash() const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (auto w : words_) {
    h ^= static_cast<std::size_t>(w);
    h *= 1099511628211ULL;
  }
  return h;
}

std::string action_name(std::string_view schema, std::span<const std::string> args) {
  std::string out(schema);
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += ',';
    out += args[i];
  }
  out += ')';
  return out;
}

std::optional<AtomId> GroundedTask::atom_id(std::string_view atom) const {
  auto it = std::lower_bound(atoms.begin(), atoms.end(), atom);
  if (it == atoms.end() || *it != atom) return std::nullopt;
  return static_cast<AtomId>(it - atoms.begin());
}

std::optional<std::size_t> GroundedTask::action_index(std::string_view name) const {
  auto it = std::lower_bound(actions.begin(), actions.end(), name,
                             [](const GroundedAction& a, std::string_view n) { return a.name < n; });
  if (it == actions.end() || it->name != name) return std::nullopt;
  return static_cast<std::size_t>(it - actions.begin());
}

const GroundedAction* GroundedTask::find_action(std::string_view name) const {
  auto idx = action_index(name);
  return idx ? &actions[*idx] : nullptr;
}

bool GroundedTask::goal_satisfied(const WorldState& state) const { return state.contains_all(goal); }

WorldState GroundedTask::make_state(std::span<const std::string> true_atoms) const {
  WorldState s(atoms.size());
  for (const auto& a : true_atoms) {
    if (auto id = atom_id(a)) s.insert(*id);
  }
  return s;
}

bool applicable(const WorldState& state, const GroundedAction& action) { return state.contains_all(action.pre); }

WorldState apply_action(const WorldState& state, const GroundedAction& action) {
  if (!applicable(state, action)) {
    throw PddlError(ErrorKind::PreconditionViolated, "action " + action.name + " is not applicable");
  }
  WorldState next = state;
  for (AtomId a : action.del) next.erase(a);
  for (AtomId a : action.add) next.insert(a);
  return next;
}

std::string serialize(const GroundedTask& task) {
  std::ostringstream out;
  out << "atoms " << task.atoms.size() << '\n';
  for (std::size_t i = 0; i < task.atoms.size(); ++i) out << i << ' ' << task.atoms[i] << '\n';
  auto list = [&](const char* tag, const AtomSet& s) {
    out << ' ' << tag;
    for (AtomId a : s) out << ' ' << a;
  };
  out << "actions " << task.actions.size() << '\n';
  for (const auto& a : task.actions) {
    out << a.name << " agent=" << a.agent << " cost=" << a.cost;
    list("pre", a.pre);
    list("add", a.add);
    list("del", a.del);
    out << '\n';
  }
  out << "init";
  for (AtomId a : task.init.atoms()) out << ' ' << a;
  out << "\ngoal";
  for (AtomId a : task.goal) out << ' ' << a;
  out << '\n';
  return out.str();
}

namespace {

struct LiftedAtom {
  std::string predicate;
  // Each argument is either a parameter slot (>= 0) or a constant.
  std::vector<int> slots;
  std::vector<std::string> constants;
};

LiftedAtom lift(const Literal& l, const ActionSchema& schema) {
  LiftedAtom out;
  out.predicate = l.predicate;
  for (const auto& arg : l.args) {
    auto it = std::find_if(schema.params.begin(), schema.params.end(),
                           [&](const TypedName& p) { return p.name == arg; });
    if (it != schema.params.end()) {
      out.slots.push_back(static_cast<int>(it - schema.params.begin()));
      out.constants.emplace_back();
    } else {
      out.slots.push_back(-1);
      out.constants.push_back(arg);
    }
  }
  return out;
}

std::string instantiate(const LiftedAtom& a, const std::vector<std::string>& binding) {
  std::string out = "(" + a.predicate;
  for (std::size_t i = 0; i < a.slots.size(); ++i) {
    out += ' ';
    out += a.slots[i] >= 0 ? binding[static_cast<std::size_t>(a.slots[i])] : a.constants[i];
  }
  out += ')';
  return out;
}

int max_slot(const LiftedAtom& a) {
  int m = -1;
  for (int s : a.slots) m = std::max(m, s);
  return m;
}

struct Candidate {
  std::string name;
  std::string schema;
  std::vector<std::string> args;
  std::string agent;
  std::vector<std::string> pre;
  std::vector<std::string> add;
  std::vector<std::string> del;
};

}  // namespace

GroundedTask ground_task(const Domain& domain, const Problem& problem, const GroundingOptions& options) {
  std::vector<TypedName> universe = domain.constants;
  universe.insert(universe.end(), problem.objects.begin(), problem.objects.end());
  std::sort(universe.begin(), universe.end(), [](const TypedName& a, const TypedName& b) { return a.name < b.name; });

  std::set<std::string> fluents;
  for (const auto& f : domain.fluent_predicates()) fluents.insert(f);
  std::set<std::string> init_atoms;
  for (const auto& a : problem.init) init_atoms.insert(a.str());

  std::vector<Candidate> candidates;
  for (const auto& schema : domain.actions) {
    const std::size_t arity = schema.params.size();
    std::vector<std::vector<std::string>> domains(arity);
    for (std::size_t i = 0; i < arity; ++i) {
      for (const auto& o : universe) {
        if (domain.is_subtype(o.type, schema.params[i].type)) domains[i].push_back(o.name);
      }
    }
    std::vector<LiftedAtom> pre, add, del;
    for (const auto& l : schema.precondition) pre.push_back(lift(l, schema));
    for (const auto& l : schema.add) add.push_back(lift(l, schema));
    for (const auto& l : schema.del) del.push_back(lift(l, schema));
    // Static preconditions are checked as soon as their last slot is bound.
    std::vector<std::vector<const LiftedAtom*>> static_checks(arity + 1);
    for (const auto& p : pre) {
      if (fluents.count(p.predicate) != 0) continue;
      static_checks[static_cast<std::size_t>(max_slot(p) + 1)].push_back(&p);
    }

    std::vector<std::string> binding(arity);
    std::function<void(std::size_t)> bind = [&](std::size_t depth) {
      for (const LiftedAtom* s : static_checks[depth]) {
        if (init_atoms.count(instantiate(*s, binding)) == 0) return;
      }
      if (depth == arity) {
        if (options.keep && !options.keep(schema, binding)) return;
        if (candidates.size() >= options.max_actions) {
          throw PddlError(ErrorKind::GroundingExplosion,
                          "more than " + std::to_string(options.max_actions) + " grounded actions");
        }
        Candidate c;
        c.schema = schema.name;
        c.args = binding;
        c.name = action_name(schema.name, binding);
        c.agent = binding[schema.agent_param];
        for (const auto& p : pre) c.pre.push_back(instantiate(p, binding));
        for (const auto& p : add) c.add.push_back(instantiate(p, binding));
        for (const auto& p : del) c.del.push_back(instantiate(p, binding));
        candidates.push_back(std::move(c));
        return;
      }
      for (const auto& obj : domains[depth]) {
        binding[depth] = obj;
        bind(depth + 1);
      }
    };
    bind(0);
  }

  // Delete-relaxed reachability fixpoint.
  std::set<std::string> reachable = init_atoms;
  std::vector<bool> enabled(candidates.size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (enabled[i]) continue;
      const auto& c = candidates[i];
      if (!std::all_of(c.pre.begin(), c.pre.end(), [&](const std::string& a) { return reachable.count(a) != 0; })) {
        continue;
      }
      enabled[i] = true;
      changed = true;
      for (const auto& a : c.add) reachable.insert(a);
    }
  }

  std::set<std::string> atom_names = init_atoms;
  for (const auto& g : problem.goal) atom_names.insert(g.str());
  std::vector<Candidate> kept;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!enabled[i]) continue;
    for (const auto& a : candidates[i].pre) atom_names.insert(a);
    for (const auto& a : candidates[i].add) atom_names.insert(a);
    for (const auto& a : candidates[i].del) atom_names.insert(a);
    kept.push_back(std::move(candidates[i]));
  }
  std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) { return a.name < b.name; });

  GroundedTask task;
  task.atoms.assign(atom_names.begin(), atom_names.end());
  auto to_set = [&](const std::vector<std::string>& names) {
    AtomSet out;
    for (const auto& n : names) out.push_back(*task.atom_id(n));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  for (auto& c : kept) {
    GroundedAction a;
    a.name = std::move(c.name);
    a.schema = std::move(c.schema);
    a.args = std::move(c.args);
    a.agent = std::move(c.agent);
    a.pre = to_set(c.pre);
    a.add = to_set(c.add);
    AtomSet del = to_set(c.del);
    // An atom both added and deleted ends up true; keep add ∩ del empty.
    std::erase_if(del, [&](AtomId x) { return std::binary_search(a.add.begin(), a.add.end(), x); });
    a.del = std::move(del);
    task.actions.push_back(std::move(a));
  }
  task.init = WorldState(task.atoms.size());
  for (const auto& a : init_atoms) task.init.insert(*task.atom_id(a));
  std::vector<std::string> goal_names;
  for (const auto& g : problem.goal) goal_names.push_back(g.str());
  task.goal = to_set(goal_names);
  return task;
}

}  // namespace mmrec::pddl
