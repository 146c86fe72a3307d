// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/context/fact.hpp"

#include <cctype>
#include <stdexcept>

namespace mmrec::context {

const char* to_string(Category c) {
  switch (c) {
    case Category::Object: return "object";
    case Category::Init: return "init";
    case Category::Goal: return "goal";
    case Category::Capability: return "capability";
    case Category::Preference: return "preference";
  }
  return "?";
}

const char* to_string(Polarity p) { return p == Polarity::Positive ? "+" : "-"; }

std::optional<Category> parse_category(std::string_view s) {
  const std::string n = normalize_name(s);
  if (n == "object") return Category::Object;
  if (n == "init") return Category::Init;
  if (n == "goal") return Category::Goal;
  if (n == "capability") return Category::Capability;
  if (n == "preference") return Category::Preference;
  return std::nullopt;
}

std::optional<Polarity> parse_polarity(std::string_view s) {
  const std::string n = normalize_name(s);
  if (n == "+" || n == "positive") return Polarity::Positive;
  if (n == "-" || n == "negative") return Polarity::Negative;
  return std::nullopt;
}

std::string normalize_name(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

FactKey Fact::key() const {
  std::string k = normalize_name(to_string(category));
  k += '|';
  k += normalize_name(subject);
  k += '|';
  k += normalize_name(relation);
  k += '|';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) k += ',';
    k += normalize_name(args[i]);
  }
  k += '|';
  k += to_string(polarity);
  return {std::move(k)};
}

pddl::Atom Fact::atom() const {
  pddl::Atom a;
  a.predicate = relation;
  a.args.push_back(subject);
  a.args.insert(a.args.end(), args.begin(), args.end());
  return a;
}

std::string default_gloss(const Fact& f) {
  std::string args;
  for (const auto& a : f.args) args += " " + a;
  const bool neg = f.polarity == Polarity::Negative;
  switch (f.category) {
    case Category::Object:
      return f.subject + (neg ? " is not a " : " is a ") + f.relation + ".";
    case Category::Init:
      return (neg ? "It is not the case that " : "It is the case that ") + f.relation + "(" + f.subject + args + ").";
    case Category::Goal:
      return std::string(neg ? "The task does not require " : "The task requires ") + f.relation + "(" + f.subject +
             args + ").";
    case Category::Preference:
      return f.subject + (neg ? " does not want " : " wants ") + f.relation + args + ".";
    case Category::Capability:
      return f.subject + (neg ? " cannot " : " can ") + f.relation + ".";
  }
  return f.subject;
}

Fact canonical(Fact f) {
  f.subject = normalize_name(f.subject);
  f.relation = normalize_name(f.relation);
  for (auto& a : f.args) a = normalize_name(a);
  if (f.subject.empty() || f.relation.empty()) throw std::invalid_argument("fact needs a subject and a relation");
  for (const auto& a : f.args) {
    if (a.empty()) throw std::invalid_argument("fact argument is empty");
  }
  if (f.gloss.find_first_not_of(" \t\r\n") == std::string::npos) f.gloss = default_gloss(f);
  return f;
}

}  // namespace mmrec::context
