// Copyright 2026 The CogScale Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Width search for a trainable-parameter budget.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace cogscale {

class InfeasibleBudget : public std::invalid_argument {
 public:
  InfeasibleBudget(std::int64_t budget, std::int64_t minimum)
      : std::invalid_argument("budget " + std::to_string(budget) +
                              " is below the smallest achievable count " + std::to_string(minimum)),
        minimum_(minimum) {}
  std::int64_t minimum() const noexcept { return minimum_; }

 private:
  std::int64_t minimum_;
};

class NonMonotoneCount : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using CountFn = std::function<std::int64_t(std::int64_t width)>;

struct BudgetSpec {
  std::int64_t budget = 0;
  CountFn count;
  std::int64_t lo = 1;
  std::int64_t hi = 1;
};

/// Largest width in [lo, hi] whose count does not exceed the budget.
///
/// Eight evenly spaced widths are probed first; a decreasing pair means the
/// count function is not monotone and binary search would be meaningless.
inline std::int64_t match_width(const BudgetSpec& spec) {
  if (!spec.count) throw std::invalid_argument("match_width: empty count function");
  if (spec.lo > spec.hi) throw std::invalid_argument("match_width: lo > hi");
  constexpr int kProbes = 8;
  std::int64_t prev_w = spec.lo;
  std::int64_t prev_c = spec.count(spec.lo);
  for (int i = 1; i < kProbes; ++i) {
    const std::int64_t w = spec.lo + (spec.hi - spec.lo) * i / (kProbes - 1);
    if (w == prev_w) continue;
    const std::int64_t c = spec.count(w);
    if (c < prev_c) {
      throw NonMonotoneCount("count function decreases between widths " + std::to_string(prev_w) +
                             " and " + std::to_string(w));
    }
    prev_w = w;
    prev_c = c;
  }
  const std::int64_t lo_count = spec.count(spec.lo);
  if (lo_count > spec.budget) throw InfeasibleBudget(spec.budget, lo_count);

  std::int64_t good = spec.lo;  // count(good) <= budget
  std::int64_t bad = spec.hi + 1;  // first width known (or assumed) over budget
  while (bad - good > 1) {
    const std::int64_t mid = good + (bad - good) / 2;
    if (spec.count(mid) <= spec.budget) good = mid;
    else bad = mid;
  }
  return good;
}

/// Readout-only ESN count: one weight per unit plus a bias, per output.
inline std::int64_t esn_param_count(std::int64_t n_units, std::int64_t d_out) {
  return d_out * (n_units + 1);
}

inline std::int64_t esn_units_for_budget(std::int64_t budget, std::int64_t d_out) {
  return match_width({budget, [d_out](std::int64_t n) { return esn_param_count(n, d_out); }, 1,
                      std::max<std::int64_t>(1, budget)});
}

}  // namespace cogscale
