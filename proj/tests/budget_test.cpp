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


#include <gtest/gtest.h>

#include <random>

#include "cogscale/budget.hpp"

namespace cs = cogscale;

namespace {

/// Largest width with count <= budget by scanning every width.
std::int64_t scan(const cs::BudgetSpec& s) {
  std::int64_t best = -1;
  for (std::int64_t w = s.lo; w <= s.hi; ++w) {
    if (s.count(w) <= s.budget) best = w;
  }
  return best;
}

}  // namespace

TEST(Budget, EsnUnits) {
  EXPECT_EQ(cs::esn_units_for_budget(10000, 3), 3332);
  EXPECT_EQ(cs::esn_units_for_budget(10000, 8), 1249);
  EXPECT_EQ(cs::esn_units_for_budget(10000, 1), 9999);
  EXPECT_EQ(cs::esn_param_count(3332, 3), 9999);
  EXPECT_GT(cs::esn_param_count(3333, 3), 10000);
}

TEST(Budget, MatchesLinearScanOnRandomMonotoneCounts) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::int64_t a = 1 + static_cast<std::int64_t>(rng() % 50);
    const std::int64_t b = static_cast<std::int64_t>(rng() % 7);
    const std::int64_t c = static_cast<std::int64_t>(rng() % 100);
    cs::BudgetSpec s;
    s.count = [=](std::int64_t w) { return b * w * w + a * w + c; };
    s.lo = 1 + static_cast<std::int64_t>(rng() % 5);
    s.hi = s.lo + static_cast<std::int64_t>(rng() % 400);
    s.budget = s.count(s.lo) + static_cast<std::int64_t>(rng() % 200000);
    EXPECT_EQ(cs::match_width(s), scan(s)) << a << " " << b << " " << c;
  }
}

TEST(Budget, StepFunctionWithPlateaus) {
  cs::BudgetSpec s{100, [](std::int64_t w) { return (w / 10) * 25; }, 1, 100};
  EXPECT_EQ(cs::match_width(s), scan(s));
  EXPECT_EQ(cs::match_width(s), 49);
}

TEST(Budget, HiFitsEntirely) {
  cs::BudgetSpec s{1000, [](std::int64_t w) { return w; }, 1, 50};
  EXPECT_EQ(cs::match_width(s), 50);
}

TEST(Budget, SingleWidthRange) {
  cs::BudgetSpec s{10, [](std::int64_t w) { return w; }, 7, 7};
  EXPECT_EQ(cs::match_width(s), 7);
  s.budget = 6;
  EXPECT_THROW(cs::match_width(s), cs::InfeasibleBudget);
}

TEST(Budget, InfeasibleReportsMinimum) {
  try {
    cs::match_width({5, [](std::int64_t w) { return 3 * (w + 1); }, 1, 100});
    FAIL();
  } catch (const cs::InfeasibleBudget& e) {
    EXPECT_EQ(e.minimum(), 6);
  }
  EXPECT_THROW(cs::esn_units_for_budget(3, 8), cs::InfeasibleBudget);
}

TEST(Budget, DecreasingCountRejected) {
  cs::BudgetSpec s{50, [](std::int64_t w) { return 1000 - w; }, 1, 100};
  EXPECT_THROW(cs::match_width(s), cs::NonMonotoneCount);
}

TEST(Budget, BadArguments) {
  EXPECT_THROW(cs::match_width({10, {}, 1, 2}), std::invalid_argument);
  EXPECT_THROW(cs::match_width({10, [](std::int64_t w) { return w; }, 5, 2}), std::invalid_argument);
}
