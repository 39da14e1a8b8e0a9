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

// Per-task configuration, the shipped small/medium presets, and validation.

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cogscale/core.hpp"

namespace cogscale {

struct SinusForecastingConfig {
  static constexpr TaskId kTask = TaskId::kSinusForecasting;
  std::int64_t sequence_length = 200;
  std::int64_t forecast_length = 5;
  double training_ratio = 0.45;
  double validation_ratio = 0.1;
  double testing_ratio = 0.45;
  friend bool operator==(const SinusForecastingConfig&, const SinusForecastingConfig&) = default;
};

struct ChaoticForecastingConfig {
  static constexpr TaskId kTask = TaskId::kChaoticForecasting;
  std::int64_t sequence_length = 200;
  std::int64_t forecast_length = 5;
  double training_ratio = 0.45;
  double validation_ratio = 0.1;
  double testing_ratio = 0.45;
  friend bool operator==(const ChaoticForecastingConfig&,
                         const ChaoticForecastingConfig&) = default;
};

struct DiscretePostcastingConfig {
  static constexpr TaskId kTask = TaskId::kDiscretePostcasting;
  std::int64_t n_train = 100;
  std::int64_t n_valid = 20;
  std::int64_t n_test = 100;
  std::int64_t sequence_length = 50;
  std::int64_t delay = 5;
  std::int64_t n_symbols = 3;
  friend bool operator==(const DiscretePostcastingConfig&,
                         const DiscretePostcastingConfig&) = default;
};

struct ContinuousPostcastingConfig {
  static constexpr TaskId kTask = TaskId::kContinuousPostcasting;
  std::int64_t n_train = 100;
  std::int64_t n_valid = 20;
  std::int64_t n_test = 100;
  std::int64_t sequence_length = 50;
  std::int64_t delay = 5;
  friend bool operator==(const ContinuousPostcastingConfig&,
                         const ContinuousPostcastingConfig&) = default;
};

struct SimpleCopyConfig {
  static constexpr TaskId kTask = TaskId::kSimpleCopy;
  std::int64_t n_train = 100;
  std::int64_t n_valid = 20;
  std::int64_t n_test = 100;
  std::int64_t sequence_length = 22;  // content length
  std::int64_t delay = 5;
  std::int64_t n_symbols = 3;
  friend bool operator==(const SimpleCopyConfig&, const SimpleCopyConfig&) = default;
};

struct SelectiveCopyConfig {
  static constexpr TaskId kTask = TaskId::kSelectiveCopy;
  std::int64_t n_train = 100;
  std::int64_t n_valid = 20;
  std::int64_t n_test = 100;
  std::int64_t sequence_length = 40;  // content length
  std::int64_t delay = 5;
  std::int64_t n_markers = 5;
  std::int64_t n_symbols = 3;
  friend bool operator==(const SelectiveCopyConfig&, const SelectiveCopyConfig&) = default;
};

struct AssociativeRecallConfig {
  static constexpr TaskId kTask = TaskId::kAssociativeRecall;
  std::int64_t n_train = 100;
  std::int64_t n_valid = 20;
  std::int64_t n_test = 100;
  std::int64_t sequence_length = 16;
  std::int64_t num_pairs = 3;
  std::int64_t n_symbols = 5;
  friend bool operator==(const AssociativeRecallConfig&,
                         const AssociativeRecallConfig&) = default;
};

struct DiscretePatternCompletionConfig {
  static constexpr TaskId kTask = TaskId::kDiscretePatternCompletion;
  std::int64_t n_train = 100;
  std::int64_t n_valid = 20;
  std::int64_t n_test = 100;
  std::int64_t sequence_length = 60;
  std::int64_t n_symbols = 3;
  std::int64_t base_length = 4;
  double mask_ratio = 0.2;
  friend bool operator==(const DiscretePatternCompletionConfig&,
                         const DiscretePatternCompletionConfig&) = default;
};

struct ContinuousPatternCompletionConfig {
  static constexpr TaskId kTask = TaskId::kContinuousPatternCompletion;
  std::int64_t n_train = 100;
  std::int64_t n_valid = 20;
  std::int64_t n_test = 100;
  std::int64_t sequence_length = 60;
  std::int64_t base_length = 4;
  double mask_ratio = 0.2;
  friend bool operator==(const ContinuousPatternCompletionConfig&,
                         const ContinuousPatternCompletionConfig&) = default;
};

struct InductionHeadsConfig {
  static constexpr TaskId kTask = TaskId::kInductionHeads;
  std::int64_t n_train = 100;
  std::int64_t n_valid = 20;
  std::int64_t n_test = 100;
  std::int64_t sequence_length = 40;
  std::int64_t n_symbols = 3;
  friend bool operator==(const InductionHeadsConfig&, const InductionHeadsConfig&) = default;
};

struct AddingProblemConfig {
  static constexpr TaskId kTask = TaskId::kAddingProblem;
  std::int64_t n_train = 100;
  std::int64_t n_valid = 20;
  std::int64_t n_test = 100;
  std::int64_t sequence_length = 10;
  std::int64_t max_number = 3;
  friend bool operator==(const AddingProblemConfig&, const AddingProblemConfig&) = default;
};

struct SortingProblemConfig {
  static constexpr TaskId kTask = TaskId::kSortingProblem;
  std::int64_t n_train = 100;
  std::int64_t n_valid = 20;
  std::int64_t n_test = 100;
  std::int64_t sequence_length = 10;
  std::int64_t n_symbols = 3;
  friend bool operator==(const SortingProblemConfig&, const SortingProblemConfig&) = default;
};

struct BracketMatchingConfig {
  static constexpr TaskId kTask = TaskId::kBracketMatching;
  std::int64_t n_train = 100;
  std::int64_t n_valid = 20;
  std::int64_t n_test = 100;
  std::int64_t sequence_length = 50;
  std::int64_t max_depth = 5;
  friend bool operator==(const BracketMatchingConfig&, const BracketMatchingConfig&) = default;
};

/// Each label is a group of synonymous surface words; most groups hold one.
using LabelGroups = std::vector<std::vector<std::string>>;

struct CrossSituationConfig {
  static constexpr TaskId kTask = TaskId::kCrossSituation;
  std::int64_t n_train = 100;
  std::int64_t n_valid = 20;
  std::int64_t n_test = 100;
  LabelGroups objects = {{"glass"}, {"orange"}};
  LabelGroups colors = {{"blue"}, {"orange"}};
  LabelGroups positions = {{"left"}, {"right"}};
  friend bool operator==(const CrossSituationConfig&, const CrossSituationConfig&) = default;
};

/// Alternative order matches TaskId.
using TaskConfig =
    std::variant<SinusForecastingConfig, ChaoticForecastingConfig, DiscretePostcastingConfig,
                 ContinuousPostcastingConfig, SimpleCopyConfig, SelectiveCopyConfig,
                 AssociativeRecallConfig, DiscretePatternCompletionConfig,
                 ContinuousPatternCompletionConfig, InductionHeadsConfig, AddingProblemConfig,
                 SortingProblemConfig, BracketMatchingConfig, CrossSituationConfig>;

static_assert(std::variant_size_v<TaskConfig> == kNumTasks);

inline TaskId task_of(const TaskConfig& c) {
  return std::visit([](const auto& x) { return std::decay_t<decltype(x)>::kTask; }, c);
}

template <class C>
concept ForecastingConfig = std::same_as<C, SinusForecastingConfig> ||
                            std::same_as<C, ChaoticForecastingConfig>;

inline bool is_forecasting(TaskId t) {
  return t == TaskId::kSinusForecasting || t == TaskId::kChaoticForecasting;
}

/// Number of masked positions for pattern completion: ceil(ratio * L), with a
/// tolerance so 0.2 * 60 counts as 12 and not 13.
inline std::int64_t masked_count(double mask_ratio, std::int64_t length) {
  const double raw = mask_ratio * static_cast<double>(length);
  return static_cast<std::int64_t>(std::ceil(raw - 1e-9));
}

/// Contiguous split lengths of a forecasting timeline (train, valid, test).
struct ForecastSplitLengths {
  std::int64_t train = 0;
  std::int64_t valid = 0;
  std::int64_t test = 0;
};

template <ForecastingConfig C>
ForecastSplitLengths forecast_split_lengths(const C& c) {
  const auto len = static_cast<double>(c.sequence_length);
  ForecastSplitLengths out;
  out.train = std::llround(len * c.training_ratio);
  out.valid = std::llround(len * c.validation_ratio);
  out.test = c.sequence_length - out.train - out.valid;
  return out;
}

// --- presets ---------------------------------------------------------------

namespace detail {

template <class C>
C forecasting_preset(Difficulty d) {
  C c;
  if (d == Difficulty::kMedium) {
    c.sequence_length = 2000;
    c.forecast_length = 15;
  }
  return c;
}

}  // namespace detail

inline TaskConfig preset(TaskId task, Difficulty d) {
  const bool md = d == Difficulty::kMedium;
  const std::int64_t n_train = md ? 1000 : 100;
  const std::int64_t n_valid = md ? 200 : 20;
  const std::int64_t n_test = md ? 1000 : 100;
  switch (task) {
    case TaskId::kSinusForecasting:
      return detail::forecasting_preset<SinusForecastingConfig>(d);
    case TaskId::kChaoticForecasting:
      return detail::forecasting_preset<ChaoticForecastingConfig>(d);
    case TaskId::kDiscretePostcasting:
      return DiscretePostcastingConfig{n_train, n_valid, n_test, md ? 100 : 50, md ? 15 : 5,
                                       md ? 8 : 3};
    case TaskId::kContinuousPostcasting:
      return ContinuousPostcastingConfig{n_train, n_valid, n_test, md ? 100 : 50, md ? 15 : 5};
    case TaskId::kSimpleCopy:
      return SimpleCopyConfig{n_train, n_valid, n_test, md ? 50 : 22, md ? 10 : 5, md ? 8 : 3};
    case TaskId::kSelectiveCopy:
      return SelectiveCopyConfig{n_train, n_valid, n_test, md ? 80 : 40, md ? 10 : 5,
                                 md ? 10 : 5,    md ? 8 : 3};
    case TaskId::kAssociativeRecall:
      return AssociativeRecallConfig{n_train, n_valid, n_test, md ? 32 : 16, md ? 7 : 3,
                                     md ? 16 : 5};
    case TaskId::kDiscretePatternCompletion:
      return DiscretePatternCompletionConfig{n_train,      n_valid,     n_test, md ? 150 : 60,
                                             md ? 8 : 3,   md ? 10 : 4, 0.2};
    case TaskId::kContinuousPatternCompletion:
      return ContinuousPatternCompletionConfig{n_train,     n_valid, n_test, md ? 150 : 60,
                                               md ? 10 : 4, 0.2};
    case TaskId::kInductionHeads:
      return InductionHeadsConfig{n_train, n_valid, n_test, md ? 100 : 40, md ? 8 : 3};
    case TaskId::kAddingProblem:
      return AddingProblemConfig{n_train, n_valid, n_test, md ? 20 : 10, md ? 8 : 3};
    case TaskId::kSortingProblem:
      return SortingProblemConfig{n_train, n_valid, n_test, md ? 20 : 10, md ? 8 : 3};
    case TaskId::kBracketMatching:
      return BracketMatchingConfig{n_train, n_valid, n_test, md ? 100 : 50, md ? 10 : 5};
    case TaskId::kCrossSituation: {
      CrossSituationConfig c{n_train, n_valid, n_test};
      if (md) {
        c.objects = {{"glass"}, {"orange"}, {"cup"}, {"bowl"}};
        c.colors = {{"blue"}, {"orange"}, {"green"}, {"red"}};
        c.positions = {{"left"}, {"right"}, {"center", "middle"}};
      }
      return c;
    }
  }
  throw LookupError("preset: unknown task id " + std::to_string(static_cast<int>(task)));
}

// --- validation ------------------------------------------------------------

namespace detail {

class Violations {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) list_.push_back(what);
  }
  void at_least(std::int64_t v, std::int64_t lo, const char* name) {
    require(v >= lo, std::string(name) + " >= " + std::to_string(lo) + " (got " +
                         std::to_string(v) + ")");
  }
  template <class C>
  void counts(const C& c) {
    at_least(c.n_train, 1, "n_train");
    at_least(c.n_valid, 1, "n_valid");
    at_least(c.n_test, 1, "n_test");
  }
  void delay_below_length(std::int64_t delay, std::int64_t length) {
    at_least(delay, 0, "delay");
    require(delay < length, "delay < sequence_length (delay=" + std::to_string(delay) +
                                ", sequence_length=" + std::to_string(length) + ")");
  }
  std::vector<std::string> take() { return std::move(list_); }

 private:
  std::vector<std::string> list_;
};

template <ForecastingConfig C>
void check(Violations& v, const C& c) {
  v.at_least(c.sequence_length, 1, "sequence_length");
  v.at_least(c.forecast_length, 0, "forecast_length");
  v.require(c.forecast_length < c.sequence_length,
            "forecast_length < sequence_length (forecast_length=" +
                std::to_string(c.forecast_length) + ")");
  v.require(c.training_ratio > 0 && c.validation_ratio > 0 && c.testing_ratio > 0,
            "ratios positive");
  const double sum = c.training_ratio + c.validation_ratio + c.testing_ratio;
  v.require(std::abs(sum - 1.0) <= 1e-9, "ratios sum to 1 (got " + std::to_string(sum) + ")");
  if (c.sequence_length >= 1 && std::abs(sum - 1.0) <= 1e-9) {
    const auto s = forecast_split_lengths(c);
    v.require(s.train >= 1 && s.valid >= 1 && s.test >= 1, "every split has at least one step");
  }
}

inline void check(Violations& v, const DiscretePostcastingConfig& c) {
  v.counts(c);
  v.at_least(c.sequence_length, 1, "sequence_length");
  v.delay_below_length(c.delay, c.sequence_length);
  v.at_least(c.n_symbols, 2, "n_symbols");
}

inline void check(Violations& v, const ContinuousPostcastingConfig& c) {
  v.counts(c);
  v.at_least(c.sequence_length, 1, "sequence_length");
  v.delay_below_length(c.delay, c.sequence_length);
}

inline void check(Violations& v, const SimpleCopyConfig& c) {
  v.counts(c);
  v.at_least(c.sequence_length, 1, "sequence_length");
  v.delay_below_length(c.delay, c.sequence_length);
  v.at_least(c.n_symbols, 2, "n_symbols");
}

inline void check(Violations& v, const SelectiveCopyConfig& c) {
  v.counts(c);
  v.at_least(c.sequence_length, 1, "sequence_length");
  v.delay_below_length(c.delay, c.sequence_length);
  v.at_least(c.n_symbols, 2, "n_symbols");
  v.at_least(c.n_markers, 1, "n_markers");
  v.require(c.n_markers <= c.sequence_length, "n_markers <= sequence_length");
}

inline void check(Violations& v, const AssociativeRecallConfig& c) {
  v.counts(c);
  v.at_least(c.sequence_length, 1, "sequence_length");
  v.at_least(c.num_pairs, 1, "num_pairs");
  v.at_least(c.n_symbols, 2, "n_symbols");
  v.require(c.num_pairs * 2 + 1 <= c.sequence_length, "num_pairs*2 + 1 <= sequence_length");
  v.require(c.num_pairs <= c.n_symbols, "num_pairs <= n_symbols");
}

template <class C>
void check_pattern(Violations& v, const C& c) {
  v.counts(c);
  v.at_least(c.sequence_length, 1, "sequence_length");
  v.at_least(c.base_length, 1, "base_length");
  v.require(c.base_length <= c.sequence_length, "base_length <= sequence_length");
  v.require(c.mask_ratio > 0.0 && c.mask_ratio < 1.0, "mask_ratio in (0,1)");
}

inline void check(Violations& v, const DiscretePatternCompletionConfig& c) {
  check_pattern(v, c);
  v.at_least(c.n_symbols, 2, "n_symbols");
}

inline void check(Violations& v, const ContinuousPatternCompletionConfig& c) {
  check_pattern(v, c);
}

inline void check(Violations& v, const InductionHeadsConfig& c) {
  v.counts(c);
  v.at_least(c.sequence_length, 2, "sequence_length");
  v.require(c.sequence_length % 2 == 0, "sequence_length even");
  v.at_least(c.n_symbols, 2, "n_symbols");
}

inline void check(Violations& v, const AddingProblemConfig& c) {
  v.counts(c);
  v.at_least(c.sequence_length, 3, "sequence_length");
  v.at_least(c.max_number, 2, "max_number");
}

inline void check(Violations& v, const SortingProblemConfig& c) {
  v.counts(c);
  v.at_least(c.sequence_length, 1, "sequence_length");
  v.at_least(c.n_symbols, 2, "n_symbols");
}

inline void check(Violations& v, const BracketMatchingConfig& c) {
  v.counts(c);
  v.at_least(c.sequence_length, 2, "sequence_length");
  v.require(c.sequence_length % 2 == 0, "sequence_length even");
  v.at_least(c.max_depth, 1, "max_depth");
}

inline const std::set<std::string>& function_words() {
  static const std::set<std::string> words = {"the", "is", "on", "and"};
  return words;
}

inline void check_labels(Violations& v, const LabelGroups& groups, const char* name) {
  v.require(groups.size() >= 2, std::string("at least 2 ") + name);
  std::set<std::string> seen;
  for (const auto& g : groups) {
    v.require(!g.empty(), std::string(name) + ": empty synonym group");
    for (const auto& w : g) {
      v.require(!w.empty(), std::string(name) + ": empty word");
      v.require(!function_words().contains(w),
                std::string(name) + ": '" + w + "' collides with a template word");
      v.require(seen.insert(w).second,
                std::string(name) + ": word '" + w + "' maps to more than one label");
    }
  }
}

inline void check(Violations& v, const CrossSituationConfig& c) {
  v.counts(c);
  check_labels(v, c.objects, "objects");
  check_labels(v, c.colors, "colors");
  check_labels(v, c.positions, "positions");
}

}  // namespace detail

/// Every violated invariant of `config`; empty means valid.
inline std::vector<std::string> validate(const TaskConfig& config) {
  detail::Violations v;
  std::visit([&](const auto& c) { detail::check(v, c); }, config);
  return v.take();
}

inline void require_valid(const TaskConfig& config) {
  auto violations = validate(config);
  if (!violations.empty()) throw ConfigError(std::move(violations));
}

// --- JSON ------------------------------------------------------------------

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SinusForecastingConfig, sequence_length, forecast_length,
                                   training_ratio, validation_ratio, testing_ratio)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ChaoticForecastingConfig, sequence_length, forecast_length,
                                   training_ratio, validation_ratio, testing_ratio)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DiscretePostcastingConfig, n_train, n_valid, n_test,
                                   sequence_length, delay, n_symbols)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ContinuousPostcastingConfig, n_train, n_valid, n_test,
                                   sequence_length, delay)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SimpleCopyConfig, n_train, n_valid, n_test, sequence_length,
                                   delay, n_symbols)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SelectiveCopyConfig, n_train, n_valid, n_test,
                                   sequence_length, delay, n_markers, n_symbols)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AssociativeRecallConfig, n_train, n_valid, n_test,
                                   sequence_length, num_pairs, n_symbols)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DiscretePatternCompletionConfig, n_train, n_valid, n_test,
                                   sequence_length, n_symbols, base_length, mask_ratio)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ContinuousPatternCompletionConfig, n_train, n_valid, n_test,
                                   sequence_length, base_length, mask_ratio)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(InductionHeadsConfig, n_train, n_valid, n_test,
                                   sequence_length, n_symbols)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AddingProblemConfig, n_train, n_valid, n_test,
                                   sequence_length, max_number)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SortingProblemConfig, n_train, n_valid, n_test,
                                   sequence_length, n_symbols)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BracketMatchingConfig, n_train, n_valid, n_test,
                                   sequence_length, max_depth)

namespace detail {

// A label with one word serializes as a plain string, a synonym group as a list.
inline nlohmann::json labels_to_json(const LabelGroups& groups) {
  auto out = nlohmann::json::array();
  for (const auto& g : groups) {
    if (g.size() == 1) out.push_back(g.front());
    else out.push_back(g);
  }
  return out;
}

inline LabelGroups labels_from_json(const nlohmann::json& j) {
  LabelGroups out;
  for (const auto& item : j) {
    if (item.is_string()) out.push_back({item.get<std::string>()});
    else out.push_back(item.get<std::vector<std::string>>());
  }
  return out;
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const CrossSituationConfig& c) {
  j = nlohmann::json{{"n_train", c.n_train},
                     {"n_valid", c.n_valid},
                     {"n_test", c.n_test},
                     {"objects", detail::labels_to_json(c.objects)},
                     {"colors", detail::labels_to_json(c.colors)},
                     {"positions", detail::labels_to_json(c.positions)}};
}

inline void from_json(const nlohmann::json& j, CrossSituationConfig& c) {
  j.at("n_train").get_to(c.n_train);
  j.at("n_valid").get_to(c.n_valid);
  j.at("n_test").get_to(c.n_test);
  c.objects = detail::labels_from_json(j.at("objects"));
  c.colors = detail::labels_from_json(j.at("colors"));
  c.positions = detail::labels_from_json(j.at("positions"));
}

/// `{"task": "<name>", ...parameters}`.
inline nlohmann::json config_to_json(const TaskConfig& config) {
  nlohmann::json j = std::visit([](const auto& c) { return nlohmann::json(c); }, config);
  j["task"] = std::string(task_name(task_of(config)));
  return j;
}

namespace detail {

template <std::size_t I = 0>
TaskConfig config_alternative(std::size_t index, const nlohmann::json& j) {
  if constexpr (I < std::variant_size_v<TaskConfig>) {
    if (I == index) return j.get<std::variant_alternative_t<I, TaskConfig>>();
    return config_alternative<I + 1>(index, j);
  } else {
    throw LookupError("config: bad task index");
  }
}

}  // namespace detail

/// Parses a config object. Missing parameters fall back to the task's small
/// preset, so a config file may override only what it changes.
inline TaskConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("task")) {
    throw ConfigError("config must be an object with a \"task\" field");
  }
  const TaskId task = task_from_name(j.at("task").get<std::string>());
  nlohmann::json merged = config_to_json(preset(task, Difficulty::kSmall));
  merged.update(j);
  merged.erase("task");
  try {
    return detail::config_alternative(static_cast<std::size_t>(task), merged);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") + e.what());
  }
}

}  // namespace cogscale
