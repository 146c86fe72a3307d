// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/context/fact_io.hpp"

#include <fstream>
#include <stdexcept>

namespace mmrec::context {

void to_json(nlohmann::json& j, const Fact& f) {
  j = nlohmann::json{{"category", to_string(f.category)}, {"subject", f.subject},
                     {"relation", f.relation},           {"args", f.args},
                     {"polarity", to_string(f.polarity)}, {"gloss", f.gloss}};
}

void from_json(const nlohmann::json& j, Fact& f) {
  if (!j.is_object()) throw std::runtime_error("fact record must be an object");
  auto category = parse_category(j.at("category").get<std::string>());
  if (!category) throw std::runtime_error("unknown category '" + j.at("category").get<std::string>() + "'");
  f.category = *category;
  f.subject = j.at("subject").get<std::string>();
  f.relation = j.at("relation").get<std::string>();
  f.args = j.contains("args") ? j.at("args").get<std::vector<std::string>>() : std::vector<std::string>{};
  auto polarity = parse_polarity(j.value("polarity", std::string("+")));
  if (!polarity) throw std::runtime_error("polarity must be '+' or '-'");
  f.polarity = *polarity;
  f.gloss = j.value("gloss", std::string());
  f = canonical(std::move(f));
}

std::vector<Fact> facts_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::runtime_error("fact file must hold a JSON array");
  std::vector<Fact> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    try {
      out.push_back(j[i].get<Fact>());
    } catch (const std::exception& e) {
      throw std::runtime_error("fact #" + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Fact> load_facts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  try {
    return facts_from_json(j);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_facts(const std::string& path, const std::vector<Fact>& facts) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << nlohmann::json(facts).dump(2) << '\n';
}

}  // namespace mmrec::context
