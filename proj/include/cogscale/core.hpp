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

// Shared data model: task registry, metric kinds, samples.

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cogscale {

class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}
  explicit ConfigError(const std::string& violation)
      : ConfigError(std::vector<std::string>{violation}) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid task configuration:";
    for (const auto& s : v) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TaskId : std::uint8_t {
  kSinusForecasting = 0,
  kChaoticForecasting,
  kDiscretePostcasting,
  kContinuousPostcasting,
  kSimpleCopy,
  kSelectiveCopy,
  kAssociativeRecall,
  kDiscretePatternCompletion,
  kContinuousPatternCompletion,
  kInductionHeads,
  kAddingProblem,
  kSortingProblem,
  kBracketMatching,
  kCrossSituation,
};

inline constexpr std::size_t kNumTasks = 14;

enum class MetricKind : std::uint8_t {
  kMse = 0,
  kErrorRate,
  kLabelErrorRate,
};

enum class Split : std::uint8_t { kTrain = 0, kValid, kTest };

inline constexpr std::array<Split, 3> kAllSplits = {Split::kTrain, Split::kValid, Split::kTest};

enum class Difficulty : std::uint8_t { kSmall = 0, kMedium };

namespace detail {

struct TaskInfo {
  TaskId id;
  std::string_view name;
  MetricKind metric;
};

inline constexpr std::array<TaskInfo, kNumTasks> kTaskTable = {{
    {TaskId::kSinusForecasting, "sinus_forecasting", MetricKind::kMse},
    {TaskId::kChaoticForecasting, "chaotic_forecasting", MetricKind::kMse},
    {TaskId::kDiscretePostcasting, "discrete_postcasting", MetricKind::kErrorRate},
    {TaskId::kContinuousPostcasting, "continuous_postcasting", MetricKind::kMse},
    {TaskId::kSimpleCopy, "simple_copy", MetricKind::kErrorRate},
    {TaskId::kSelectiveCopy, "selective_copy", MetricKind::kErrorRate},
    {TaskId::kAssociativeRecall, "associative_recall", MetricKind::kErrorRate},
    {TaskId::kDiscretePatternCompletion, "discrete_pattern_completion", MetricKind::kErrorRate},
    {TaskId::kContinuousPatternCompletion, "continuous_pattern_completion", MetricKind::kMse},
    {TaskId::kInductionHeads, "induction_heads", MetricKind::kErrorRate},
    {TaskId::kAddingProblem, "adding_problem", MetricKind::kErrorRate},
    {TaskId::kSortingProblem, "sorting_problem", MetricKind::kErrorRate},
    {TaskId::kBracketMatching, "bracket_matching", MetricKind::kErrorRate},
    {TaskId::kCrossSituation, "cross_situation", MetricKind::kLabelErrorRate},
}};

}  // namespace detail

inline constexpr std::array<TaskId, kNumTasks> all_tasks() {
  std::array<TaskId, kNumTasks> out{};
  for (std::size_t i = 0; i < kNumTasks; ++i) out[i] = detail::kTaskTable[i].id;
  return out;
}

inline constexpr std::string_view task_name(TaskId id) {
  return detail::kTaskTable[static_cast<std::size_t>(id)].name;
}

inline constexpr MetricKind task_metric(TaskId id) {
  return detail::kTaskTable[static_cast<std::size_t>(id)].metric;
}

inline TaskId task_from_name(std::string_view name) {
  for (const auto& info : detail::kTaskTable) {
    if (info.name == name) return info.id;
  }
  throw LookupError("unknown task: " + std::string(name));
}

inline constexpr std::string_view metric_name(MetricKind m) {
  switch (m) {
    case MetricKind::kMse: return "mse";
    case MetricKind::kErrorRate: return "error_rate";
    case MetricKind::kLabelErrorRate: return "label_error_rate";
  }
  return "?";
}

inline MetricKind metric_from_name(std::string_view name) {
  for (auto m : {MetricKind::kMse, MetricKind::kErrorRate, MetricKind::kLabelErrorRate}) {
    if (metric_name(m) == name) return m;
  }
  throw LookupError("unknown metric: " + std::string(name));
}

inline constexpr std::string_view split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest: return "test";
  }
  return "?";
}

inline constexpr std::string_view difficulty_name(Difficulty d) {
  return d == Difficulty::kSmall ? "small" : "medium";
}

inline Difficulty difficulty_from_name(std::string_view name) {
  if (name == "small" || name == "SM" || name == "sm") return Difficulty::kSmall;
  if (name == "medium" || name == "MD" || name == "md") return Difficulty::kMedium;
  throw LookupError("unknown difficulty: " + std::string(name));
}

/// Row-major float storage; one row per timestep.
using Matrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// A contiguous run of output columns scored as one label.
struct SlotGroup {
  std::size_t offset = 0;
  std::size_t width = 0;

  friend bool operator==(const SlotGroup&, const SlotGroup&) = default;
};

using SlotLayout = std::vector<SlotGroup>;

struct Sample {
  Matrix input;   // T x d_in
  Matrix target;  // T x d_out
  std::vector<std::uint8_t> eval_mask;  // length T, 0 or 1
  std::optional<SlotLayout> slot_layout;

  std::size_t steps() const noexcept { return static_cast<std::size_t>(input.rows()); }

  std::size_t masked_steps() const noexcept {
    std::size_t n = 0;
    for (auto m : eval_mask) n += m != 0;
    return n;
  }

  friend bool operator==(const Sample& a, const Sample& b) {
    return a.input.rows() == b.input.rows() && a.input.cols() == b.input.cols() &&
           a.target.rows() == b.target.rows() && a.target.cols() == b.target.cols() &&
           a.input == b.input && a.target == b.target && a.eval_mask == b.eval_mask &&
           a.slot_layout == b.slot_layout;
  }
};

/// Slot groups a sample is scored with: its layout, or one group over all
/// output columns.
inline SlotLayout effective_slots(const std::optional<SlotLayout>& layout, std::size_t d_out) {
  if (layout) return *layout;
  return SlotLayout{{0, d_out}};
}

/// Checks the structural sample invariants; empty result means valid.
inline std::vector<std::string> check_sample(const Sample& s, MetricKind metric) {
  std::vector<std::string> out;
  const auto t = s.input.rows();
  if (s.target.rows() != t) out.push_back("target rows differ from input rows");
  if (static_cast<Eigen::Index>(s.eval_mask.size()) != t)
    out.push_back("eval_mask length differs from input rows");
  if (s.masked_steps() == 0) out.push_back("eval_mask has no true entry");
  if (!out.empty() || metric == MetricKind::kMse) return out;

  const auto slots = effective_slots(s.slot_layout, static_cast<std::size_t>(s.target.cols()));
  for (Eigen::Index r = 0; r < t; ++r) {
    if (!s.eval_mask[static_cast<std::size_t>(r)]) continue;
    for (const auto& g : slots) {
      int ones = 0;
      bool other = false;
      for (std::size_t c = g.offset; c < g.offset + g.width; ++c) {
        const float v = s.target(r, static_cast<Eigen::Index>(c));
        if (v == 1.0f) ++ones;
        else if (v != 0.0f) other = true;
      }
      if (ones != 1 || other) {
        out.push_back("masked target row " + std::to_string(r) + " is not one-hot in slot at " +
                      std::to_string(g.offset));
      }
    }
  }
  return out;
}

}  // namespace cogscale
