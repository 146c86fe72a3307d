// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/nlu/types.hpp"

namespace mmrec::nlu {

const char* to_string(Speaker s) { return s == Speaker::Human ? "human" : "robot"; }

const char* to_string(Attribution a) {
  switch (a) {
    case Attribution::MissingFromRobot: return "missing_from_robot";
    case Attribution::MissingFromHuman: return "missing_from_human";
    case Attribution::Both: return "both";
    case Attribution::NoNewInformation: return "no_new_information";
  }
  return "?";
}

const char* to_string(ExtractionSource s) { return s == ExtractionSource::Grammar ? "grammar" : "llm"; }

namespace {
const char* kind_name(NluError::Kind k) {
  switch (k) {
    case NluError::Kind::EndpointUnavailable: return "EndpointUnavailable";
    case NluError::Kind::SchemaViolation: return "SchemaViolation";
    case NluError::Kind::VocabularyViolation: return "VocabularyViolation";
  }
  return "NluError";
}
}  // namespace

NluError::NluError(Kind kind, const std::string& message)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + message), kind_(kind) {}

}  // namespace mmrec::nlu
