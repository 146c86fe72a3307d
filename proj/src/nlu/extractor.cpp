// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/nlu/extractor.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "mmrec/context/fact_io.hpp"
#include "mmrec/nlu/grammar.hpp"

namespace mmrec::nlu {

using context::ContextModel;
using context::Fact;

const char* to_string(NluMode m) {
  switch (m) {
    case NluMode::Grammar: return "grammar";
    case NluMode::Llm: return "llm";
    case NluMode::LlmWithGrammarFallback: return "llm-with-grammar-fallback";
  }
  return "?";
}

std::optional<NluMode> parse_nlu_mode(std::string_view s) {
  if (s == "grammar") return NluMode::Grammar;
  if (s == "llm") return NluMode::Llm;
  if (s == "llm-with-grammar-fallback") return NluMode::LlmWithGrammarFallback;
  return std::nullopt;
}

FactExtractor::FactExtractor(NluMode mode, context::Vocabulary vocabulary, std::shared_ptr<ChatTransport> transport)
    : mode_(mode), vocabulary_(std::move(vocabulary)), transport_(std::move(transport)) {}

namespace {

constexpr const char* kContract = R"({
  "attribution": "missing_from_robot" | "missing_from_human" | "both" | "no_new_information",
  "facts": [
    {"category": "object" | "init" | "goal" | "capability" | "preference",
     "subject": "<object or agent name>",
     "relation": "<type, predicate or action schema name>",
     "args": ["<object name>", ...],
     "polarity": "+" | "-",
     "gloss": "<one plain sentence>"}
  ],
  "question": {"asked": "<action name or none>", "instead_of": "<action name or none>"}
})";

std::optional<Attribution> attribution_from(const std::string& s) {
  if (s == "missing_from_robot") return Attribution::MissingFromRobot;
  if (s == "missing_from_human") return Attribution::MissingFromHuman;
  if (s == "both") return Attribution::Both;
  if (s == "no_new_information") return Attribution::NoNewInformation;
  return std::nullopt;
}

std::map<std::string, std::string> introduced_objects(const ContextModel& ctx) {
  std::map<std::string, std::string> out;
  for (const auto& [_, f] : ctx.facts()) {
    if (f.category == context::Category::Object && f.positive()) out.emplace(f.subject, f.relation);
  }
  return out;
}

// Canonical attribution given what the robot already knows.
FactExtraction settle(FactExtraction e, const ContextModel& robot_ctx) {
  if (e.query) {
    e.attribution = Attribution::MissingFromHuman;
    return e;
  }
  switch (e.attribution) {
    case Attribution::MissingFromRobot:
    case Attribution::Both: {
      const bool any_new = std::any_of(e.facts.begin(), e.facts.end(),
                                       [&](const Fact& f) { return !robot_ctx.contains(f.key()); });
      if (!any_new) e = FactExtraction{{}, Attribution::NoNewInformation, e.source, std::nullopt};
      break;
    }
    case Attribution::MissingFromHuman:
      // The human asks about facts; only those the robot holds can be explained.
      std::erase_if(e.facts, [&](const Fact& f) { return !robot_ctx.contains(f.key()); });
      if (e.facts.empty()) e.attribution = Attribution::NoNewInformation;
      break;
    case Attribution::NoNewInformation:
      e.facts.clear();
      break;
  }
  return e;
}

}  // namespace

std::optional<std::string> parse_llm_extraction(const nlohmann::json& j, FactExtraction& out) {
  out = FactExtraction{};
  out.source = ExtractionSource::Llm;
  if (!j.is_object()) return "response is not a JSON object";
  if (!j.contains("attribution") || !j["attribution"].is_string()) return "missing string field 'attribution'";
  auto attribution = attribution_from(j["attribution"].get<std::string>());
  if (!attribution) return "unknown attribution '" + j["attribution"].get<std::string>() + "'";
  out.attribution = *attribution;
  if (!j.contains("facts") || !j["facts"].is_array()) return "missing array field 'facts'";
  try {
    out.facts = context::facts_from_json(j["facts"]);
  } catch (const std::exception& e) {
    return std::string("invalid fact record: ") + e.what();
  }
  if (j.contains("question") && !j["question"].is_null()) {
    const auto& q = j["question"];
    if (!q.is_object() || !q.contains("asked") || !q["asked"].is_string()) {
      return "'question' must be an object with string 'asked'";
    }
    Query query{context::normalize_name(q["asked"].get<std::string>()),
                context::normalize_name(q.value("instead_of", std::string(kNoAction)))};
    if (query.asked.empty()) return "'question.asked' is empty";
    out.query = std::move(query);
  }
  if (out.attribution == Attribution::NoNewInformation && !out.facts.empty()) {
    return "attribution no_new_information requires an empty fact list";
  }
  if (out.attribution != Attribution::NoNewInformation && out.facts.empty() && !out.query) {
    return "attribution " + j["attribution"].get<std::string>() + " requires at least one fact";
  }
  return std::nullopt;
}

std::string FactExtractor::system_prompt(const ContextModel& robot_ctx, const std::vector<Fact>& human_visible) const {
  std::ostringstream p;
  p << "You help a robot and a human keep a shared understanding of a task. Read the human's utterance "
       "and decide whether it tells the robot something it does not know (missing_from_robot), asks the "
       "robot about something the human does not know (missing_from_human), both, or adds nothing "
       "(no_new_information). Express every fact with the vocabulary below only.\n\n";
  p << "Reply with exactly one JSON object of this form and nothing else:\n" << kContract << "\n";
  p << "Omit \"question\" unless the human asks why an action was taken.\n\n";
  p << "Types:";
  for (const auto& t : vocabulary_.type_names()) p << ' ' << t;
  p << "\nPredicates:";
  for (const auto& pr : vocabulary_.domain().predicates) {
    p << " (" << pr.name;
    for (const auto& param : pr.params) p << ' ' << param.name << " - " << param.type;
    p << ')';
  }
  p << "\nAction schemas:";
  for (const auto& a : vocabulary_.schema_names()) p << ' ' << a;
  p << "\nObjects:";
  for (const auto& [name, type] : vocabulary_.objects()) p << ' ' << name << " - " << type;
  for (const auto& [name, type] : introduced_objects(robot_ctx)) p << ' ' << name << " - " << type;
  p << "\n\nFacts the robot currently holds:\n";
  for (const auto& [k, f] : robot_ctx.facts()) p << "- " << k.value << " : " << f.gloss << '\n';
  p << "\nFacts the robot has already told the human:\n";
  for (const auto& f : human_visible) p << "- " << f.key().value << " : " << f.gloss << '\n';
  return p.str();
}

void FactExtractor::check_vocabulary(const FactExtraction& e, const ContextModel& robot_ctx) const {
  if (auto err = vocabulary_.check_all(e.facts, introduced_objects(robot_ctx))) {
    throw NluError(NluError::Kind::VocabularyViolation, *err);
  }
}

FactExtraction FactExtractor::ask_llm(const Utterance& utterance, const ContextModel& robot_ctx,
                                      const std::vector<Fact>& human_visible) const {
  if (!transport_) throw NluError(NluError::Kind::EndpointUnavailable, "no LLM endpoint configured");
  std::vector<ChatMessage> messages{{"system", system_prompt(robot_ctx, human_visible)}, {"user", utterance.text}};
  std::string last_error;
  NluError::Kind last_kind = NluError::Kind::SchemaViolation;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const std::string completion = transport_->complete(messages);
    FactExtraction e;
    std::optional<std::string> err;
    last_kind = NluError::Kind::SchemaViolation;
    if (auto j = first_json_object(completion)) {
      err = parse_llm_extraction(*j, e);
    } else {
      err = "no JSON object found in the reply";
    }
    if (!err) {
      if (auto v = vocabulary_.check_all(e.facts, introduced_objects(robot_ctx))) {
        err = "vocabulary violation: " + *v;
        last_kind = NluError::Kind::VocabularyViolation;
      }
    }
    if (!err) return e;
    last_error = *err;
    messages.push_back({"assistant", completion});
    messages.push_back({"user", "Your previous reply was rejected: " + *err +
                                    ". Reply again with a single JSON object that follows the schema and uses only "
                                    "the listed vocabulary."});
  }
  throw NluError(last_kind, last_error);
}

FactExtraction FactExtractor::raw_extract(const Utterance& utterance, const ContextModel& robot_ctx,
                                          const std::vector<Fact>& human_visible) const {
  if (mode_ != NluMode::Llm) {
    if (auto structured = parse_structured(utterance.text)) {
      check_vocabulary(*structured, robot_ctx);
      return *structured;
    }
    if (mode_ == NluMode::Grammar) return FactExtraction{};
  }
  if (mode_ == NluMode::LlmWithGrammarFallback) {
    try {
      return ask_llm(utterance, robot_ctx, human_visible);
    } catch (const NluError& e) {
      if (e.kind() != NluError::Kind::EndpointUnavailable) throw;
      return FactExtraction{};  // endpoint down: nothing the grammar can read
    }
  }
  return ask_llm(utterance, robot_ctx, human_visible);
}

FactExtraction FactExtractor::extract_facts(const Utterance& utterance, const ContextModel& robot_ctx,
                                            const std::vector<Fact>& human_visible) const {
  if (utterance.text.find_first_not_of(" \t\r\n") == std::string::npos) return FactExtraction{};
  return settle(raw_extract(utterance, robot_ctx, human_visible), robot_ctx);
}

RestatementMatch FactExtractor::match_restatement(const Utterance& restatement,
                                                  const std::vector<Fact>& communicated) const {
  RestatementMatch out;
  std::vector<context::FactKey> heard;
  if (restatement.text.find_first_not_of(" \t\r\n") != std::string::npos) {
    if (auto structured = parse_structured(restatement.text)) {
      for (const auto& f : structured->facts) heard.push_back(f.key());
    } else if (mode_ != NluMode::Grammar && transport_) {
      ContextModel told(context::Owner::Human, communicated);
      FactExtraction e;
      try {
        e = ask_llm(restatement, told, communicated);
      } catch (const NluError& err) {
        if (mode_ != NluMode::LlmWithGrammarFallback || err.kind() != NluError::Kind::EndpointUnavailable) throw;
      }
      for (const auto& f : e.facts) heard.push_back(f.key());
    }
  }
  for (const auto& f : communicated) {
    if (std::find(heard.begin(), heard.end(), f.key()) == heard.end()) out.missing.push_back(f.key());
  }
  out.matched = out.missing.empty();
  return out;
}

}  // namespace mmrec::nlu
