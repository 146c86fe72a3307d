// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mmrec/planner/plan.hpp"

namespace mmrec::divergence {

/// Default threshold. With integer distances and a strict `<`, ε = 1 means
/// the plans must match exactly.
inline constexpr double kDefaultEpsilon = 1.0;

struct DivergenceReport {
  int iteration = 0;
  /// d(π^{H(R)}, π^R): the human's prediction of the robot vs the robot's plan.
  std::size_t d_hr = 0;
  /// d(π^{R(H)}, π^H): the robot's prediction of the human vs the human's plan.
  std::size_t d_rh = 0;
  double epsilon = kDefaultEpsilon;
  std::size_t fact_ed_r_gt = 0;
  std::size_t fact_ed_h_gt = 0;
  std::size_t fact_ed_r_h = 0;

  friend bool operator==(const DivergenceReport&, const DivergenceReport&) = default;
};

/// Levenshtein distance over grounded-action name sequences.
std::size_t plan_divergence(const planner::Plan& p, const planner::Plan& q);

/// d_hr < ε and d_rh < ε.
bool reconciliation_complete(const DivergenceReport& r);

/// d_hr + d_rh.
double objective(const DivergenceReport& r);

inline constexpr const char* kMetricsHeader = "t,d_hr,d_rh,ed_r_gt,ed_h_gt,ed_r_h";

/// `t,d_hr,d_rh,ed_r_gt,ed_h_gt,ed_r_h` without trailing newline.
std::string to_csv_row(const DivergenceReport& r);
std::string to_csv(const std::vector<DivergenceReport>& series);

}  // namespace mmrec::divergence
