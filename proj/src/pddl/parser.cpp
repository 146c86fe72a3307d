// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/pddl/parser.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "mmrec/pddl/error.hpp"
#include "mmrec/pddl/sexpr.hpp"

namespace mmrec::pddl {

namespace {

const std::set<std::string, std::less<>> kSupportedRequirements = {":strips", ":typing"};

[[noreturn]] void fail(ErrorKind kind, const std::string& msg, const SExpr& at) {
  throw PddlError(kind, msg, at.line, at.column);
}

const std::string& expect_symbol(const SExpr& e, const char* what) {
  if (!e.is_symbol()) fail(ErrorKind::SyntaxError, std::string("expected ") + what, e);
  return e.symbol;
}

const SExpr& expect_list(const SExpr& e, const char* what) {
  if (!e.is_list) fail(ErrorKind::SyntaxError, std::string("expected ") + what, e);
  return e;
}

bool is_variable(std::string_view s) { return !s.empty() && s.front() == '?'; }

// "a b - t c" -> (a,t) (b,t) (c,object)
std::vector<TypedName> parse_typed_list(const std::vector<SExpr>& items, std::size_t start) {
  std::vector<TypedName> out;
  std::vector<std::string> pending;
  for (std::size_t i = start; i < items.size(); ++i) {
    const std::string& tok = expect_symbol(items[i], "name in typed list");
    if (tok == "-") {
      if (i + 1 >= items.size()) fail(ErrorKind::SyntaxError, "expected type after '-'", items[i]);
      if (items[i + 1].has_head("either")) {
        fail(ErrorKind::Unsupported, "'either' types are not supported", items[i + 1]);
      }
      const std::string& type = expect_symbol(items[i + 1], "type name");
      if (pending.empty()) fail(ErrorKind::SyntaxError, "'-' without preceding names", items[i]);
      for (auto& n : pending) out.push_back({std::move(n), type});
      pending.clear();
      ++i;
    } else {
      pending.push_back(tok);
    }
  }
  for (auto& n : pending) out.push_back({std::move(n), std::string(kRootType)});
  return out;
}

// Accepts `()`, a single literal, or `(and lit...)`. Only positive literals
// unless `allow_negation` (effects); negated ones go to `negative`.
void parse_conjunction(const SExpr& e, bool allow_negation, std::vector<Literal>& positive,
                       std::vector<Literal>& negative, std::vector<const SExpr*>& positions) {
  expect_list(e, "formula");
  if (e.items.empty()) return;
  if (e.has_head("and")) {
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      parse_conjunction(e.items[i], allow_negation, positive, negative, positions);
    }
    return;
  }
  const std::string& head = expect_symbol(e.items.front(), "predicate name");
  if (head == "not") {
    if (!allow_negation) fail(ErrorKind::Unsupported, "negative preconditions are not supported", e);
    if (e.items.size() != 2 || !e.items[1].is_list || e.items[1].has_head("not")) {
      fail(ErrorKind::SyntaxError, "malformed (not ...)", e);
    }
    std::vector<Literal> inner;
    std::vector<Literal> unused;
    parse_conjunction(e.items[1], false, inner, unused, positions);
    for (auto& l : inner) negative.push_back(std::move(l));
    return;
  }
  static const std::set<std::string, std::less<>> kUnsupported = {
      "or", "imply", "exists", "forall", "when", "=", "increase", "decrease", "assign"};
  if (kUnsupported.count(head) != 0) fail(ErrorKind::Unsupported, "'" + head + "' is outside STRIPS", e);
  Literal lit;
  lit.predicate = head;
  for (std::size_t i = 1; i < e.items.size(); ++i) lit.args.push_back(expect_symbol(e.items[i], "argument"));
  positive.push_back(std::move(lit));
  positions.push_back(&e);
}

void check_types(const Domain& d, const SExpr& at) {
  std::set<std::string> seen;
  for (const auto& t : d.types) {
    if (t.name == kRootType) fail(ErrorKind::DuplicateName, "type 'object' is implicit", at);
    if (!seen.insert(t.name).second) fail(ErrorKind::DuplicateName, "duplicate type '" + t.name + "'", at);
  }
  for (const auto& t : d.types) {
    if (!d.has_type(t.type)) fail(ErrorKind::UnknownType, "unknown parent type '" + t.type + "'", at);
  }
  // Cycle check: following parents must reach `object` within |types| steps.
  for (const auto& t : d.types) {
    std::string current = t.type;
    std::size_t steps = 0;
    while (current != kRootType) {
      if (++steps > d.types.size()) fail(ErrorKind::CyclicTypes, "type hierarchy cycle through '" + t.name + "'", at);
      auto it = std::find_if(d.types.begin(), d.types.end(), [&](const TypedName& x) { return x.name == current; });
      current = it->type;
    }
  }
}

void check_literal(const Domain& d, const ActionSchema& a, const Literal& lit, const SExpr& at) {
  const PredicateDecl* p = d.find_predicate(lit.predicate);
  if (p == nullptr) fail(ErrorKind::UnknownPredicate, "undeclared predicate '" + lit.predicate + "'", at);
  if (p->params.size() != lit.args.size()) {
    fail(ErrorKind::ArityMismatch,
         "predicate '" + lit.predicate + "' expects " + std::to_string(p->params.size()) + " arguments", at);
  }
  for (std::size_t i = 0; i < lit.args.size(); ++i) {
    const std::string& arg = lit.args[i];
    std::string type;
    if (is_variable(arg)) {
      auto it = std::find_if(a.params.begin(), a.params.end(), [&](const TypedName& t) { return t.name == arg; });
      if (it == a.params.end()) fail(ErrorKind::UnboundVariable, "variable '" + arg + "' is not a parameter", at);
      type = it->type;
    } else {
      auto it = std::find_if(d.constants.begin(), d.constants.end(),
                             [&](const TypedName& t) { return t.name == arg; });
      if (it == d.constants.end()) fail(ErrorKind::UnknownObject, "unknown constant '" + arg + "'", at);
      type = it->type;
    }
    // Types must overlap in the hierarchy, otherwise the literal can never hold.
    if (!d.is_subtype(type, p->params[i].type) && !d.is_subtype(p->params[i].type, type)) {
      fail(ErrorKind::ArityMismatch,
           "argument '" + arg + "' of type '" + type + "' does not fit '" + p->params[i].type + "'", at);
    }
  }
}

ActionSchema parse_action(const SExpr& e, const Domain& d) {
  if (e.items.size() < 2) fail(ErrorKind::SyntaxError, "action without name", e);
  ActionSchema a;
  a.name = expect_symbol(e.items[1], "action name");
  std::vector<const SExpr*> positions;
  std::vector<const SExpr*> effect_positions;
  for (std::size_t i = 2; i < e.items.size(); i += 2) {
    const std::string& key = expect_symbol(e.items[i], "action keyword");
    if (i + 1 >= e.items.size()) fail(ErrorKind::SyntaxError, "missing value for " + key, e.items[i]);
    const SExpr& value = e.items[i + 1];
    if (key == ":parameters") {
      a.params = parse_typed_list(expect_list(value, "parameter list").items, 0);
    } else if (key == ":precondition") {
      std::vector<Literal> unused;
      parse_conjunction(value, false, a.precondition, unused, positions);
    } else if (key == ":effect") {
      parse_conjunction(value, true, a.add, a.del, effect_positions);
    } else {
      fail(ErrorKind::Unsupported, "unsupported action keyword " + key, e.items[i]);
    }
  }
  std::set<std::string> names;
  for (const auto& p : a.params) {
    if (!is_variable(p.name)) fail(ErrorKind::SyntaxError, "parameter '" + p.name + "' must start with '?'", e);
    if (!names.insert(p.name).second) fail(ErrorKind::DuplicateName, "duplicate parameter " + p.name, e);
    if (!d.has_type(p.type)) fail(ErrorKind::UnknownType, "unknown type '" + p.type + "'", e);
  }
  auto agent = std::find_if(a.params.begin(), a.params.end(),
                            [&](const TypedName& p) { return d.is_subtype(p.type, kAgentType); });
  if (agent == a.params.end()) {
    fail(ErrorKind::MissingAgentParameter, "action '" + a.name + "' has no parameter of type agent", e);
  }
  a.agent_param = static_cast<std::size_t>(agent - a.params.begin());
  for (std::size_t i = 0; i < a.precondition.size(); ++i) check_literal(d, a, a.precondition[i], *positions[i]);
  for (const auto& l : a.add) check_literal(d, a, l, e);
  for (const auto& l : a.del) check_literal(d, a, l, e);
  return a;
}

}  // namespace

Domain parse_domain(std::string_view text) {
  auto exprs = read_sexprs(text);
  if (exprs.size() != 1) {
    throw PddlError(ErrorKind::SyntaxError, "expected exactly one (define ...) form", 1, 1);
  }
  const SExpr& root = exprs.front();
  if (!root.has_head("define") || root.items.size() < 2 || !root.items[1].has_head("domain") ||
      root.items[1].items.size() != 2) {
    fail(ErrorKind::SyntaxError, "expected (define (domain NAME) ...)", root);
  }
  Domain d;
  d.name = expect_symbol(root.items[1].items[1], "domain name");

  // Sections are processed in dependency order regardless of textual order.
  const SExpr* types = nullptr;
  const SExpr* constants = nullptr;
  const SExpr* predicates = nullptr;
  std::vector<const SExpr*> actions;
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& s = expect_list(root.items[i], "domain section");
    if (s.items.empty() || !s.items.front().is_symbol()) fail(ErrorKind::SyntaxError, "malformed section", s);
    const std::string& head = s.items.front().symbol;
    if (head == ":requirements") {
      for (std::size_t j = 1; j < s.items.size(); ++j) {
        const std::string& r = expect_symbol(s.items[j], "requirement");
        if (kSupportedRequirements.count(r) == 0) fail(ErrorKind::Unsupported, "unsupported requirement " + r, s.items[j]);
        d.requirements.push_back(r);
      }
    } else if (head == ":types") {
      types = &s;
    } else if (head == ":constants") {
      constants = &s;
    } else if (head == ":predicates") {
      predicates = &s;
    } else if (head == ":action") {
      actions.push_back(&s);
    } else {
      fail(ErrorKind::Unsupported, "unsupported section " + head, s);
    }
  }
  if (types != nullptr) {
    d.types = parse_typed_list(types->items, 1);
    check_types(d, *types);
  }
  if (constants != nullptr) {
    d.constants = parse_typed_list(constants->items, 1);
    std::set<std::string> seen;
    for (const auto& c : d.constants) {
      if (!d.has_type(c.type)) fail(ErrorKind::UnknownType, "unknown type '" + c.type + "'", *constants);
      if (!seen.insert(c.name).second) fail(ErrorKind::DuplicateName, "duplicate constant " + c.name, *constants);
    }
  }
  if (predicates != nullptr) {
    std::set<std::string> seen;
    for (std::size_t j = 1; j < predicates->items.size(); ++j) {
      const SExpr& p = expect_list(predicates->items[j], "predicate declaration");
      if (p.items.empty()) fail(ErrorKind::SyntaxError, "empty predicate declaration", p);
      PredicateDecl decl;
      decl.name = expect_symbol(p.items.front(), "predicate name");
      decl.params = parse_typed_list(p.items, 1);
      for (const auto& param : decl.params) {
        if (!d.has_type(param.type)) fail(ErrorKind::UnknownType, "unknown type '" + param.type + "'", p);
      }
      if (!seen.insert(decl.name).second) fail(ErrorKind::DuplicateName, "duplicate predicate " + decl.name, p);
      d.predicates.push_back(std::move(decl));
    }
  }
  std::set<std::string> action_names;
  for (const SExpr* a : actions) {
    ActionSchema schema = parse_action(*a, d);
    if (!action_names.insert(schema.name).second) fail(ErrorKind::DuplicateName, "duplicate action " + schema.name, *a);
    d.actions.push_back(std::move(schema));
  }
  return d;
}

namespace {

Atom parse_ground_atom(const SExpr& e, const Domain& d, const Problem& p, ErrorKind ill_typed) {
  expect_list(e, "ground atom");
  if (e.items.empty()) fail(ErrorKind::SyntaxError, "empty atom", e);
  if (e.has_head("not")) fail(ErrorKind::Unsupported, "negative literals are not supported here", e);
  Atom atom;
  atom.predicate = expect_symbol(e.items.front(), "predicate name");
  const PredicateDecl* decl = d.find_predicate(atom.predicate);
  if (decl == nullptr) fail(ErrorKind::UnknownPredicate, "undeclared predicate '" + atom.predicate + "'", e);
  if (decl->params.size() + 1 != e.items.size()) {
    fail(ErrorKind::ArityMismatch, "predicate '" + atom.predicate + "' expects " +
                                       std::to_string(decl->params.size()) + " arguments", e);
  }
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const std::string& obj = expect_symbol(e.items[i], "object name");
    if (is_variable(obj)) fail(ErrorKind::SyntaxError, "variables are not allowed in ground atoms", e.items[i]);
    auto type = p.type_of(obj, d);
    if (!type) fail(ErrorKind::UnknownObject, "undeclared object '" + obj + "'", e.items[i]);
    if (!d.is_subtype(*type, decl->params[i - 1].type)) {
      fail(ill_typed, "object '" + obj + "' of type '" + *type + "' does not fit '" + decl->params[i - 1].type + "'",
           e.items[i]);
    }
    atom.args.push_back(obj);
  }
  return atom;
}

void collect_goal(const SExpr& e, std::vector<const SExpr*>& out) {
  expect_list(e, "goal");
  if (e.items.empty()) return;
  if (e.has_head("and")) {
    for (std::size_t i = 1; i < e.items.size(); ++i) collect_goal(e.items[i], out);
    return;
  }
  out.push_back(&e);
}

}  // namespace

Problem parse_problem(std::string_view text, const Domain& domain) {
  auto exprs = read_sexprs(text);
  if (exprs.size() != 1) throw PddlError(ErrorKind::SyntaxError, "expected exactly one (define ...) form", 1, 1);
  const SExpr& root = exprs.front();
  if (!root.has_head("define") || root.items.size() < 2 || !root.items[1].has_head("problem") ||
      root.items[1].items.size() != 2) {
    fail(ErrorKind::SyntaxError, "expected (define (problem NAME) ...)", root);
  }
  Problem p;
  p.name = expect_symbol(root.items[1].items[1], "problem name");
  const SExpr* objects = nullptr;
  const SExpr* init = nullptr;
  const SExpr* goal = nullptr;
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& s = expect_list(root.items[i], "problem section");
    if (s.items.empty() || !s.items.front().is_symbol()) fail(ErrorKind::SyntaxError, "malformed section", s);
    const std::string& head = s.items.front().symbol;
    if (head == ":domain") {
      if (s.items.size() != 2) fail(ErrorKind::SyntaxError, "malformed :domain", s);
      p.domain_name = expect_symbol(s.items[1], "domain name");
    } else if (head == ":objects") {
      objects = &s;
    } else if (head == ":init") {
      init = &s;
    } else if (head == ":goal") {
      goal = &s;
    } else if (head == ":requirements") {
      continue;
    } else {
      fail(ErrorKind::Unsupported, "unsupported section " + head, s);
    }
  }
  if (p.domain_name != domain.name) {
    fail(ErrorKind::DomainMismatch, "problem is for domain '" + p.domain_name + "', not '" + domain.name + "'", root);
  }
  if (objects != nullptr) {
    p.objects = parse_typed_list(objects->items, 1);
    std::set<std::string> seen;
    for (const auto& c : domain.constants) seen.insert(c.name);
    for (const auto& o : p.objects) {
      if (!domain.has_type(o.type)) fail(ErrorKind::UnknownObjectType, "object '" + o.name + "' has unknown type '" + o.type + "'", *objects);
      if (!seen.insert(o.name).second) fail(ErrorKind::DuplicateName, "duplicate object " + o.name, *objects);
    }
  }
  if (init != nullptr) {
    std::set<std::string> seen;
    for (std::size_t i = 1; i < init->items.size(); ++i) {
      Atom a = parse_ground_atom(init->items[i], domain, p, ErrorKind::InitIllTyped);
      if (seen.insert(a.str()).second) p.init.push_back(std::move(a));
    }
  }
  if (goal != nullptr) {
    if (goal->items.size() != 2) fail(ErrorKind::SyntaxError, "(:goal ...) takes one formula", *goal);
    std::vector<const SExpr*> lits;
    collect_goal(goal->items[1], lits);
    std::set<std::string> seen;
    for (const SExpr* e : lits) {
      if (e->has_head("not") || e->has_head("or")) fail(ErrorKind::Unsupported, "goal must be a conjunction of atoms", *e);
      Atom a = parse_ground_atom(*e, domain, p, ErrorKind::GoalIllTyped);
      if (seen.insert(a.str()).second) p.goal.push_back(std::move(a));
    }
  }
  return p;
}

namespace {

void print_typed(std::ostringstream& out, const std::vector<TypedName>& items) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out << ' ';
    out << items[i].name;
    // Group runs of equal type: "a b - t".
    if (i + 1 == items.size() || items[i + 1].type != items[i].type) out << " - " << items[i].type;
  }
}

void print_literal(std::ostringstream& out, const Literal& l) {
  out << '(' << l.predicate;
  for (const auto& a : l.args) out << ' ' << a;
  out << ')';
}

}  // namespace

std::string print_domain(const Domain& d) {
  std::ostringstream out;
  out << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    out << "  (:requirements";
    for (const auto& r : d.requirements) out << ' ' << r;
    out << ")\n";
  }
  if (!d.types.empty()) {
    out << "  (:types ";
    print_typed(out, d.types);
    out << ")\n";
  }
  if (!d.constants.empty()) {
    out << "  (:constants ";
    print_typed(out, d.constants);
    out << ")\n";
  }
  out << "  (:predicates";
  for (const auto& p : d.predicates) {
    out << "\n    (" << p.name;
    if (!p.params.empty()) {
      out << ' ';
      print_typed(out, p.params);
    }
    out << ')';
  }
  out << ")\n";
  for (const auto& a : d.actions) {
    out << "  (:action " << a.name << "\n    :parameters (";
    print_typed(out, a.params);
    out << ")\n    :precondition (and";
    for (const auto& l : a.precondition) {
      out << ' ';
      print_literal(out, l);
    }
    out << ")\n    :effect (and";
    for (const auto& l : a.add) {
      out << ' ';
      print_literal(out, l);
    }
    for (const auto& l : a.del) {
      out << " (not ";
      print_literal(out, l);
      out << ')';
    }
    out << "))\n";
  }
  out << ")\n";
  return out.str();
}

std::string print_problem(const Problem& p) {
  std::ostringstream out;
  out << "(define (problem " << p.name << ")\n  (:domain " << p.domain_name << ")\n";
  out << "  (:objects";
  if (!p.objects.empty()) {
    out << ' ';
    print_typed(out, p.objects);
  }
  out << ")\n  (:init";
  for (const auto& a : p.init) out << "\n    " << a.str();
  out << ")\n  (:goal (and";
  for (const auto& a : p.goal) out << "\n    " << a.str();
  out << ")))\n";
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace mmrec::pddl
