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

// Masked scoring and report aggregation.
//
// All three metrics only look at rows whose eval_mask entry is set. Scores
// pooled over several samples weight every scored unit (step, or step x slot)
// equally rather than averaging per-sample scores.

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "cogscale/core.hpp"

namespace cogscale {

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Index of the largest entry in columns [offset, offset + width) of `row`;
/// ties go to the lowest index.
template <class Row>
std::size_t argmax_in(const Row& row, std::size_t offset, std::size_t width) {
  std::size_t best = 0;
  auto best_v = row(static_cast<Eigen::Index>(offset));
  for (std::size_t j = 1; j < width; ++j) {
    const auto v = row(static_cast<Eigen::Index>(offset + j));
    if (v > best_v) {
      best_v = v;
      best = j;
    }
  }
  return best;
}

/// Running numerator/denominator for one metric kind.
class MetricAccumulator {
 public:
  explicit MetricAccumulator(MetricKind kind) : kind_(kind) {}

  template <class Derived>
  void add(const Eigen::MatrixBase<Derived>& pred, const Sample& s) {
    if (pred.rows() != s.target.rows() || pred.cols() != s.target.cols()) {
      throw MetricError("prediction shape " + std::to_string(pred.rows()) + "x" +
                        std::to_string(pred.cols()) + " does not match target " +
                        std::to_string(s.target.rows()) + "x" + std::to_string(s.target.cols()));
    }
    if (s.eval_mask.size() != static_cast<std::size_t>(s.target.rows())) {
      throw MetricError("eval_mask length does not match target rows");
    }
    const auto d_out = static_cast<std::size_t>(s.target.cols());
    SlotLayout slots;
    if (kind_ == MetricKind::kLabelErrorRate) {
      if (!s.slot_layout) throw MetricError("label error rate needs a slot layout");
      slots = *s.slot_layout;
    } else {
      slots = {{0, d_out}};
    }
    for (Eigen::Index t = 0; t < s.target.rows(); ++t) {
      if (!s.eval_mask[static_cast<std::size_t>(t)]) continue;
      if (kind_ == MetricKind::kMse) {
        for (Eigen::Index j = 0; j < s.target.cols(); ++j) {
          const double e = static_cast<double>(pred(t, j)) - static_cast<double>(s.target(t, j));
          sum_ += e * e;
        }
        units_ += d_out;
      } else {
        for (const auto& g : slots) {
          sum_ += argmax_in(pred.row(t), g.offset, g.width) !=
                          argmax_in(s.target.row(t), g.offset, g.width)
                      ? 1.0
                      : 0.0;
          ++units_;
        }
      }
      ++steps_;
    }
  }

  double score() const {
    if (units_ == 0) throw MetricError("no masked steps to score");
    return sum_ / static_cast<double>(units_);
  }

  /// Masked timesteps seen so far.
  std::size_t n_evaluated() const noexcept { return steps_; }
  MetricKind kind() const noexcept { return kind_; }

 private:
  MetricKind kind_;
  double sum_ = 0.0;
  std::size_t units_ = 0;
  std::size_t steps_ = 0;
};

template <class Derived>
double score(MetricKind kind, const Eigen::MatrixBase<Derived>& pred, const Sample& s) {
  MetricAccumulator acc(kind);
  acc.add(pred, s);
  return acc.score();
}

template <class Derived>
double score_mse(const Eigen::MatrixBase<Derived>& pred, const Sample& s) {
  return score(MetricKind::kMse, pred, s);
}

template <class Derived>
double score_error_rate(const Eigen::MatrixBase<Derived>& pred, const Sample& s) {
  return score(MetricKind::kErrorRate, pred, s);
}

template <class Derived>
double score_label_error_rate(const Eigen::MatrixBase<Derived>& pred, const Sample& s) {
  return score(MetricKind::kLabelErrorRate, pred, s);
}

// --- reports ------------------------------------------------------------------

struct SplitScore {
  double score = 0.0;
  std::size_t n_evaluated = 0;

  friend bool operator==(const SplitScore&, const SplitScore&) = default;
};

/// One trained run (one model configuration and one seed) scored on the
/// validation and test splits. `params` holds the model hyperparameters that
/// identify the configuration; runs differing only in seed share them.
struct EvalReport {
  std::string task;
  std::string difficulty;
  std::string model;
  std::int64_t budget = 0;
  std::uint64_t seed = 0;
  std::string metric;
  nlohmann::json params = nlohmann::json::object();
  std::optional<SplitScore> valid;
  std::optional<SplitScore> test;
  nlohmann::json info = nlohmann::json::object();  // run details that do not identify the config
  std::string config_hash;
  std::string error;  // non-empty when the run failed

  bool ok() const { return error.empty() && valid && test; }
  std::string config_key() const { return params.dump(); }

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

inline void to_json(nlohmann::json& j, const EvalReport& r) {
  j = nlohmann::json{{"task", r.task},     {"difficulty", r.difficulty},
                     {"model", r.model},   {"budget", r.budget},
                     {"seed", r.seed},     {"metric", r.metric},
                     {"params", r.params}, {"info", r.info},
                     {"config_hash", r.config_hash}};
  auto put = [&](const char* key, const std::optional<SplitScore>& s) {
    if (s) j[key] = {{"score", s->score}, {"n_evaluated", s->n_evaluated}};
    else j[key] = nullptr;
  };
  put("valid", r.valid);
  put("test", r.test);
  if (!r.error.empty()) j["error"] = r.error;
}

inline void from_json(const nlohmann::json& j, EvalReport& r) {
  j.at("task").get_to(r.task);
  j.at("difficulty").get_to(r.difficulty);
  j.at("model").get_to(r.model);
  j.at("budget").get_to(r.budget);
  j.at("seed").get_to(r.seed);
  j.at("metric").get_to(r.metric);
  r.params = j.value("params", nlohmann::json::object());
  r.info = j.value("info", nlohmann::json::object());
  r.config_hash = j.value("config_hash", std::string{});
  auto get = [&](const char* key) -> std::optional<SplitScore> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return SplitScore{j[key].at("score").get<double>(), j[key].at("n_evaluated").get<std::size_t>()};
  };
  r.valid = get("valid");
  r.test = get("test");
  r.error = j.value("error", std::string{});
}

struct GroupKey {
  std::string task;
  std::string difficulty;
  std::string model;
  std::int64_t budget = 0;

  friend auto operator<=>(const GroupKey&, const GroupKey&) = default;
};

struct AggregateRow {
  GroupKey key;
  std::string metric;
  double best_overall = 0.0;
  double mean = 0.0;
  double std = 0.0;
  std::string selected_config;  // params of the config whose runs give mean/std
  std::size_t runs = 0;         // successful runs in the group
};

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Population standard deviation (divides by n).
inline double population_std(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

/// Groups reports by (task, difficulty, model, budget). best_overall is the
/// minimum test score over every successful run in the group. mean/std are
/// over the seeds of the configuration with the lowest mean validation score;
/// ties go to the lexicographically smallest config key. Failed runs are
/// ignored; a group with no successful run is an error.
inline std::vector<AggregateRow> aggregate(const std::vector<EvalReport>& reports) {
  if (reports.empty()) throw MetricError("aggregate: no reports");
  struct Runs {
    std::vector<double> valid;
    std::vector<double> test;
  };
  std::map<GroupKey, std::map<std::string, Runs>> groups;
  std::map<GroupKey, std::string> metrics;
  for (const auto& r : reports) {
    GroupKey key{r.task, r.difficulty, r.model, r.budget};
    auto& g = groups[key];
    auto [it, fresh] = metrics.emplace(key, r.metric);
    if (!fresh && it->second != r.metric) {
      throw MetricError("aggregate: mixed metrics in group " + r.task + "/" + r.difficulty);
    }
    if (!r.ok()) continue;
    auto& runs = g[r.config_key()];
    runs.valid.push_back(r.valid->score);
    runs.test.push_back(r.test->score);
  }
  std::vector<AggregateRow> out;
  for (const auto& [key, configs] : groups) {
    if (configs.empty()) {
      throw MetricError("aggregate: every run failed in group " + key.task + "/" + key.difficulty +
                        "/" + key.model + "/" + std::to_string(key.budget));
    }
    AggregateRow row;
    row.key = key;
    row.metric = metrics.at(key);
    row.best_overall = INFINITY;
    const Runs* chosen = nullptr;
    double chosen_valid = INFINITY;
    for (const auto& [cfg, runs] : configs) {
      for (double t : runs.test) row.best_overall = std::min(row.best_overall, t);
      row.runs += runs.test.size();
      const double mv = mean_of(runs.valid);
      if (chosen == nullptr || mv < chosen_valid) {
        chosen = &runs;
        chosen_valid = mv;
        row.selected_config = cfg;
      }
    }
    row.mean = mean_of(chosen->test);
    row.std = population_std(chosen->test);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace cogscale
