// Copyright 2026 The mmrec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <ranges>
#include <vector>

namespace mmrec::divergence {

/// Unit-cost edit distance (insert, delete, substitute) between two ranges.
/// Single-row dynamic program, O(|a|·|b|) time, O(|b|) space.
template <std::ranges::random_access_range A, std::ranges::random_access_range B>
std::size_t levenshtein(const A& a, const B& b) {
  const auto m = static_cast<std::size_t>(std::ranges::size(a));
  const auto n = static_cast<std::size_t>(std::ranges::size(b));
  if (m == 0) return n;
  if (n == 0) return m;
  std::vector<std::size_t> row(n + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t diagonal = row[0];
    row[0] = i + 1;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t above = row[j + 1];
      const std::size_t substitute = diagonal + (std::ranges::begin(a)[i] == std::ranges::begin(b)[j] ? 0 : 1);
      row[j + 1] = std::min({above + 1, row[j] + 1, substitute});
      diagonal = above;
    }
  }
  return row[n];
}

}  // namespace mmrec::divergence
