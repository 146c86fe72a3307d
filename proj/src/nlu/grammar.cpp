// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/nlu/grammar.hpp"

#include <sstream>
#include <stdexcept>
#include <vector>

namespace mmrec::nlu {

using context::Fact;

namespace {

std::vector<std::string> split_clauses(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (c == ';' || c == '\n') {
      out.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  out.push_back(current);
  std::erase_if(out, [](const std::string& s) { return s.find_first_not_of(" \t\r") == std::string::npos; });
  return out;
}

std::vector<std::string> tokens(const std::string& clause) {
  std::istringstream in(clause);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(context::normalize_name(t));
  return out;
}

std::optional<Attribution> parse_target(const std::string& s) {
  if (s == "robot") return Attribution::MissingFromRobot;
  if (s == "human") return Attribution::MissingFromHuman;
  if (s == "both") return Attribution::Both;
  return std::nullopt;
}

std::string target_name(Attribution a) {
  switch (a) {
    case Attribution::MissingFromRobot: return "robot";
    case Attribution::MissingFromHuman: return "human";
    case Attribution::Both: return "both";
    case Attribution::NoNewInformation: break;
  }
  throw std::invalid_argument("NoNewInformation has no missing-from target");
}

bool is_name(const std::string& s) {
  return !s.empty() && s != "+" && s != "-" && s.back() != ':' && s.find(';') == std::string::npos;
}

struct ParsedFact {
  Fact fact;
  Attribution attribution;
};

std::optional<ParsedFact> parse_fact_clause(const std::vector<std::string>& t) {
  // fact: cat subj rel args... pol missing-from: target
  if (t.size() < 7 || t[0] != "fact:") return std::nullopt;
  if (t[t.size() - 2] != "missing-from:") return std::nullopt;
  auto target = parse_target(t.back());
  if (!target) return std::nullopt;
  auto polarity = context::parse_polarity(t[t.size() - 3]);
  if (!polarity || (t[t.size() - 3] != "+" && t[t.size() - 3] != "-")) return std::nullopt;
  auto category = context::parse_category(t[1]);
  if (!category) return std::nullopt;
  Fact f;
  f.category = *category;
  f.subject = t[2];
  f.relation = t[3];
  for (std::size_t i = 4; i + 3 < t.size(); ++i) f.args.push_back(t[i]);
  f.polarity = *polarity;
  if (!is_name(f.subject) || !is_name(f.relation)) return std::nullopt;
  for (const auto& a : f.args) {
    if (!is_name(a)) return std::nullopt;
  }
  f.gloss = context::default_gloss(f);
  return ParsedFact{std::move(f), *target};
}

std::optional<Query> parse_query_clause(const std::vector<std::string>& t) {
  if (t.size() != 4 || t[0] != "why:" || t[2] != "instead-of:") return std::nullopt;
  if (!is_name(t[1]) || !is_name(t[3])) return std::nullopt;
  return Query{t[1], t[3]};
}

}  // namespace

std::optional<FactExtraction> parse_structured(std::string_view text) {
  const auto clauses = split_clauses(text);
  if (clauses.empty()) return std::nullopt;
  FactExtraction out;
  out.source = ExtractionSource::Grammar;
  std::optional<Attribution> attribution;
  for (const auto& clause : clauses) {
    const auto t = tokens(clause);
    if (auto q = parse_query_clause(t)) {
      if (out.query || !out.facts.empty()) return std::nullopt;
      out.query = std::move(q);
      continue;
    }
    auto parsed = parse_fact_clause(t);
    if (!parsed || out.query) return std::nullopt;
    if (attribution && *attribution != parsed->attribution) return std::nullopt;
    attribution = parsed->attribution;
    out.facts.push_back(std::move(parsed->fact));
  }
  out.attribution = out.query ? Attribution::MissingFromHuman : *attribution;
  return out;
}

std::string render_fact_utterance(const Fact& f, Attribution attribution) {
  std::string out = "fact: ";
  out += context::to_string(f.category);
  out += ' ' + f.subject + ' ' + f.relation;
  for (const auto& a : f.args) out += ' ' + a;
  out += ' ';
  out += context::to_string(f.polarity);
  out += " missing-from: " + target_name(attribution);
  return out;
}

std::string render_facts_utterance(std::span<const Fact> facts, Attribution attribution) {
  std::string out;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    if (i > 0) out += "; ";
    out += render_fact_utterance(facts[i], attribution);
  }
  return out;
}

std::string render_query_utterance(const Query& q) { return "why: " + q.asked + " instead-of: " + q.instead_of; }

}  // namespace mmrec::nlu
