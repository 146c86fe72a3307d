// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#include "mmrec/divergence/divergence.hpp"

#include <sstream>

#include "mmrec/divergence/levenshtein.hpp"

namespace mmrec::divergence {

std::size_t plan_divergence(const planner::Plan& p, const planner::Plan& q) {
  return levenshtein(p.names(), q.names());
}

bool reconciliation_complete(const DivergenceReport& r) {
  return static_cast<double>(r.d_hr) < r.epsilon && static_cast<double>(r.d_rh) < r.epsilon;
}

double objective(const DivergenceReport& r) { return static_cast<double>(r.d_hr + r.d_rh); }

std::string to_csv_row(const DivergenceReport& r) {
  std::ostringstream out;
  out << r.iteration << ',' << r.d_hr << ',' << r.d_rh << ',' << r.fact_ed_r_gt << ',' << r.fact_ed_h_gt << ','
      << r.fact_ed_r_h;
  return out.str();
}

std::string to_csv(const std::vector<DivergenceReport>& series) {
  std::string out = std::string(kMetricsHeader) + "\n";
  for (const auto& r : series) out += to_csv_row(r) + "\n";
  return out;
}

}  // namespace mmrec::divergence
