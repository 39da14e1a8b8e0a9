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

// The fourteen task generators.
//
// Each generator is a pure function of (config, seed). Sample i of split s
// draws only from the stream sample_stream_id(task, s, i), so generation
// order and thread count never change the output. Forecasting tasks draw one
// timeline from the stream with split label kTimelineStream.
//
// Every generator is split into a `make_*` builder that turns explicit
// content (symbols, marker positions, ...) into a Sample, and a sampler that
// draws the content. The builders pin the channel layouts documented in
// `*_channels()`.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "cogscale/config.hpp"
#include "cogscale/core.hpp"
#include "cogscale/dataset.hpp"
#include "cogscale/parallel.hpp"
#include "cogscale/rng.hpp"

namespace cogscale {

/// Split label used for the single timeline stream of forecasting tasks.
inline constexpr std::uint32_t kTimelineStream = 3;

// --- shared sampling helpers ------------------------------------------------

/// First k entries of a partial Fisher-Yates shuffle of 0..n-1, in draw order.
inline std::vector<std::int64_t> sample_without_replacement(RngStream& s, std::int64_t n,
                                                            std::int64_t k) {
  if (k < 0 || k > n) throw InvalidRange("sample_without_replacement: need 0 <= k <= n");
  std::vector<std::int64_t> pool(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (std::int64_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::int64_t>(draw_index(s, static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

inline std::vector<std::int64_t> sorted_subset(RngStream& s, std::int64_t n, std::int64_t k) {
  auto out = sample_without_replacement(s, n, k);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::int64_t> draw_symbols(RngStream& s, std::int64_t count,
                                              std::int64_t n_symbols) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(count));
  for (auto& v : out) v = static_cast<std::int64_t>(draw_index(s, static_cast<std::uint64_t>(n_symbols)));
  return out;
}

namespace detail {

inline void set_one(Matrix& m, std::int64_t row, std::int64_t col) {
  m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0f;
}

inline Matrix zeros(std::int64_t rows, std::int64_t cols) {
  return Matrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

inline Sample blank_sample(std::int64_t steps, std::int64_t d_in, std::int64_t d_out) {
  Sample s;
  s.input = zeros(steps, d_in);
  s.target = zeros(steps, d_out);
  s.eval_mask.assign(static_cast<std::size_t>(steps), 0);
  return s;
}

inline Channel channel(std::string name, std::size_t offset, std::size_t width, std::string doc) {
  return Channel{std::move(name), offset, width, std::move(doc)};
}

inline void finish_layout(Dataset& d, ChannelLayout layout) {
  d.d_in = ChannelLayout::total_width(layout.input);
  d.d_out = ChannelLayout::total_width(layout.output);
  d.channels = std::move(layout);
}

/// Fills the three splits of a count-based task. `make(stream)` builds one
/// sample from its private stream.
template <class Cfg, class Make>
void fill_splits(Dataset& d, const Cfg& c, Seed seed, std::size_t threads, Make make) {
  const std::array<std::int64_t, 3> counts = {c.n_train, c.n_valid, c.n_test};
  std::size_t total = 0;
  for (std::size_t s = 0; s < 3; ++s) {
    d.split(kAllSplits[s]).resize(static_cast<std::size_t>(counts[s]));
    total += static_cast<std::size_t>(counts[s]);
  }
  const auto task = static_cast<std::uint32_t>(Cfg::kTask);
  parallel_for(total, threads, [&](std::size_t k) {
    std::size_t split = 0;
    while (k >= static_cast<std::size_t>(counts[split])) {
      k -= static_cast<std::size_t>(counts[split]);
      ++split;
    }
    RngStream stream = derive_stream(seed, sample_stream_id(task, static_cast<std::uint32_t>(split), k));
    d.split(kAllSplits[split])[k] = make(stream);
  });
}

}  // namespace detail

// --- forecasting -------------------------------------------------------------

/// Slices a T x D series into contiguous train/valid/test samples. Target row
/// t is series row t + horizon; the last `horizon` rows of the whole timeline
/// have no target and are unmasked.
inline std::array<Sample, 3> make_forecast_samples(const Eigen::MatrixXd& series,
                                                   std::int64_t horizon,
                                                   ForecastSplitLengths lengths) {
  const std::int64_t total = series.rows();
  const auto dims = series.cols();
  if (horizon < 0 || horizon >= total) {
    throw ConfigError("forecast_length must be smaller than sequence_length");
  }
  std::array<Sample, 3> out;
  const std::array<std::int64_t, 3> len = {lengths.train, lengths.valid, lengths.test};
  std::int64_t start = 0;
  for (std::size_t s = 0; s < 3; ++s) {
    Sample smp = detail::blank_sample(len[s], dims, dims);
    for (std::int64_t r = 0; r < len[s]; ++r) {
      const std::int64_t t = start + r;
      for (Eigen::Index c = 0; c < dims; ++c) {
        smp.input(r, c) = static_cast<float>(series(t, c));
        if (t + horizon < total) smp.target(r, c) = static_cast<float>(series(t + horizon, c));
      }
      smp.eval_mask[static_cast<std::size_t>(r)] = t + horizon < total ? 1 : 0;
    }
    out[s] = std::move(smp);
    start += len[s];
  }
  return out;
}

struct SinusParameters {
  double frequency = 0;  // cycles per step
  double phase = 0;      // radians
};

inline SinusParameters sinus_parameters(Seed seed) {
  RngStream s = derive_stream(seed, sample_stream_id(static_cast<std::uint32_t>(TaskId::kSinusForecasting),
                                                     kTimelineStream, 0));
  SinusParameters p;
  p.frequency = draw_uniform(s, 0.02, 0.1);
  p.phase = draw_uniform(s, 0.0, 2.0 * std::numbers::pi);
  return p;
}

inline double sinus_value(const SinusParameters& p, std::int64_t t) {
  return std::sin(2.0 * std::numbers::pi * p.frequency * static_cast<double>(t) + p.phase);
}

inline ChannelLayout sinus_channels() {
  return {{detail::channel("value", 0, 1, "u(t) = sin(2*pi*f*t + phase)")},
          {detail::channel("future_value", 0, 1, "u(t + forecast_length)")}};
}

inline Dataset gen_sinus(const SinusForecastingConfig& c, Seed seed) {
  require_valid(c);
  const auto p = sinus_parameters(seed);
  Eigen::MatrixXd series(c.sequence_length, 1);
  for (std::int64_t t = 0; t < c.sequence_length; ++t) series(t, 0) = sinus_value(p, t);
  Dataset d{c, seed};
  detail::finish_layout(d, sinus_channels());
  auto parts = make_forecast_samples(series, c.forecast_length, forecast_split_lengths(c));
  d.train = {std::move(parts[0])};
  d.valid = {std::move(parts[1])};
  d.test = {std::move(parts[2])};
  return d;
}

struct LorenzParams {
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
};

using LorenzState = std::array<double, 3>;

inline LorenzState lorenz_derivative(const LorenzState& s, const LorenzParams& p = {}) {
  return {p.sigma * (s[1] - s[0]), s[0] * (p.rho - s[2]) - s[1], s[0] * s[1] - p.beta * s[2]};
}

/// One classical fourth-order Runge-Kutta step.
inline LorenzState rk4_step(const LorenzState& s, double dt, const LorenzParams& p = {}) {
  auto axpy = [](const LorenzState& x, double a, const LorenzState& k) {
    return LorenzState{x[0] + a * k[0], x[1] + a * k[1], x[2] + a * k[2]};
  };
  const auto k1 = lorenz_derivative(s, p);
  const auto k2 = lorenz_derivative(axpy(s, dt / 2, k1), p);
  const auto k3 = lorenz_derivative(axpy(s, dt / 2, k2), p);
  const auto k4 = lorenz_derivative(axpy(s, dt, k3), p);
  LorenzState out;
  for (std::size_t i = 0; i < 3; ++i) {
    out[i] = s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

/// States s_0 = initial, s_1, ..., s_steps.
inline std::vector<LorenzState> lorenz_trajectory(const LorenzState& initial, double dt,
                                                  std::size_t steps, const LorenzParams& p = {}) {
  std::vector<LorenzState> out;
  out.reserve(steps + 1);
  out.push_back(initial);
  for (std::size_t i = 0; i < steps; ++i) {
    const auto next = rk4_step(out.back(), dt, p);
    for (double v : next) {
      if (!std::isfinite(v)) throw GenerationError("Lorenz integration produced a non-finite state");
    }
    out.push_back(next);
  }
  return out;
}

inline constexpr double kLorenzDt = 0.01;
inline constexpr std::size_t kLorenzWarmup = 1000;

inline LorenzState lorenz_initial_state(Seed seed) {
  RngStream s = derive_stream(seed, sample_stream_id(static_cast<std::uint32_t>(TaskId::kChaoticForecasting),
                                                     kTimelineStream, 0));
  LorenzState init{};
  for (auto& v : init) v = 1.0 + draw_uniform(s, -1.0, 1.0);
  return init;
}

/// The kept window (after warm-up) of raw, unnormalized Lorenz states.
inline std::vector<LorenzState> lorenz_window(Seed seed, std::int64_t length) {
  auto traj = lorenz_trajectory(lorenz_initial_state(seed), kLorenzDt,
                                kLorenzWarmup + static_cast<std::size_t>(length) - 1);
  return {traj.begin() + static_cast<std::ptrdiff_t>(kLorenzWarmup), traj.end()};
}

inline ChannelLayout chaotic_channels() {
  return {{detail::channel("xyz", 0, 3, "Lorenz x, y, z, each scaled to [-1, 1] over the window")},
          {detail::channel("future_xyz", 0, 3, "scaled state at t + forecast_length")}};
}

inline Dataset gen_chaotic(const ChaoticForecastingConfig& c, Seed seed) {
  require_valid(c);
  const auto window = lorenz_window(seed, c.sequence_length);
  Eigen::MatrixXd series(c.sequence_length, 3);
  for (std::size_t dim = 0; dim < 3; ++dim) {
    double lo = window.front()[dim];
    double hi = lo;
    for (const auto& s : window) {
      lo = std::min(lo, s[dim]);
      hi = std::max(hi, s[dim]);
    }
    const double span = hi - lo;
    for (std::int64_t t = 0; t < c.sequence_length; ++t) {
      const double v = window[static_cast<std::size_t>(t)][dim];
      series(t, static_cast<Eigen::Index>(dim)) = span > 0 ? 2.0 * (v - lo) / span - 1.0 : 0.0;
    }
  }
  Dataset d{c, seed};
  detail::finish_layout(d, chaotic_channels());
  auto parts = make_forecast_samples(series, c.forecast_length, forecast_split_lengths(c));
  d.train = {std::move(parts[0])};
  d.valid = {std::move(parts[1])};
  d.test = {std::move(parts[2])};
  return d;
}

// --- memory and retention -----------------------------------------------------

inline ChannelLayout discrete_postcasting_channels(std::int64_t n_symbols) {
  const auto n = static_cast<std::size_t>(n_symbols);
  return {{detail::channel("symbol", 0, n, "one-hot s(t)")},
          {detail::channel("delayed_symbol", 0, n, "one-hot s(t - delay)")}};
}

inline Sample make_discrete_postcasting(std::span<const std::int64_t> symbols, std::int64_t delay,
                                        std::int64_t n_symbols) {
  const auto steps = static_cast<std::int64_t>(symbols.size());
  Sample s = detail::blank_sample(steps, n_symbols, n_symbols);
  for (std::int64_t t = 0; t < steps; ++t) {
    detail::set_one(s.input, t, symbols[static_cast<std::size_t>(t)]);
    if (t >= delay) {
      detail::set_one(s.target, t, symbols[static_cast<std::size_t>(t - delay)]);
      s.eval_mask[static_cast<std::size_t>(t)] = 1;
    }
  }
  return s;
}

inline Dataset gen_discrete_postcasting(const DiscretePostcastingConfig& c, Seed seed,
                                        std::size_t threads = default_threads()) {
  require_valid(c);
  Dataset d{c, seed};
  detail::finish_layout(d, discrete_postcasting_channels(c.n_symbols));
  detail::fill_splits(d, c, seed, threads, [&](RngStream& s) {
    const auto symbols = draw_symbols(s, c.sequence_length, c.n_symbols);
    return make_discrete_postcasting(symbols, c.delay, c.n_symbols);
  });
  return d;
}

inline ChannelLayout continuous_postcasting_channels() {
  return {{detail::channel("value", 0, 1, "u(t) uniform in [-0.8, 0.8]")},
          {detail::channel("delayed_value", 0, 1, "u(t - delay)")}};
}

inline Sample make_continuous_postcasting(std::span<const float> values, std::int64_t delay) {
  const auto steps = static_cast<std::int64_t>(values.size());
  Sample s = detail::blank_sample(steps, 1, 1);
  for (std::int64_t t = 0; t < steps; ++t) {
    s.input(t, 0) = values[static_cast<std::size_t>(t)];
    if (t >= delay) {
      s.target(t, 0) = values[static_cast<std::size_t>(t - delay)];
      s.eval_mask[static_cast<std::size_t>(t)] = 1;
    }
  }
  return s;
}

inline Dataset gen_continuous_postcasting(const ContinuousPostcastingConfig& c, Seed seed,
                                          std::size_t threads = default_threads()) {
  require_valid(c);
  Dataset d{c, seed};
  detail::finish_layout(d, continuous_postcasting_channels());
  detail::fill_splits(d, c, seed, threads, [&](RngStream& s) {
    std::vector<float> values(static_cast<std::size_t>(c.sequence_length));
    for (auto& v : values) v = static_cast<float>(draw_uniform(s, -0.8, 0.8));
    return make_continuous_postcasting(values, c.delay);
  });
  return d;
}

inline ChannelLayout simple_copy_channels(std::int64_t n_symbols) {
  const auto n = static_cast<std::size_t>(n_symbols);
  return {{detail::channel("symbol", 0, n, "one-hot content symbol, steps [0, L)"),
           detail::channel("trigger", n, 1, "1 at step L + delay")},
          {detail::channel("symbol", 0, n, "content replayed over the last L steps")}};
}

/// Timeline: L content steps, `delay` silent steps, one trigger step, L
/// silent output steps whose targets replay the content.
inline Sample make_simple_copy(std::span<const std::int64_t> content, std::int64_t delay,
                               std::int64_t n_symbols) {
  const auto len = static_cast<std::int64_t>(content.size());
  const std::int64_t trigger = len + delay;
  Sample s = detail::blank_sample(2 * len + delay + 1, n_symbols + 1, n_symbols);
  for (std::int64_t t = 0; t < len; ++t) {
    detail::set_one(s.input, t, content[static_cast<std::size_t>(t)]);
    detail::set_one(s.target, trigger + 1 + t, content[static_cast<std::size_t>(t)]);
    s.eval_mask[static_cast<std::size_t>(trigger + 1 + t)] = 1;
  }
  detail::set_one(s.input, trigger, n_symbols);
  return s;
}

inline Dataset gen_simple_copy(const SimpleCopyConfig& c, Seed seed,
                               std::size_t threads = default_threads()) {
  require_valid(c);
  Dataset d{c, seed};
  detail::finish_layout(d, simple_copy_channels(c.n_symbols));
  detail::fill_splits(d, c, seed, threads, [&](RngStream& s) {
    const auto content = draw_symbols(s, c.sequence_length, c.n_symbols);
    return make_simple_copy(content, c.delay, c.n_symbols);
  });
  return d;
}

inline ChannelLayout selective_copy_channels(std::int64_t n_symbols) {
  const auto n = static_cast<std::size_t>(n_symbols);
  return {{detail::channel("symbol", 0, n, "one-hot content symbol, steps [0, L)"),
           detail::channel("marker", n, 1, "1 on the content steps to be recalled"),
           detail::channel("trigger", n + 1, 1, "1 at step L + delay")},
          {detail::channel("symbol", 0, n, "marked symbols in position order, last n_markers steps")}};
}

/// `markers` must be sorted and distinct.
inline Sample make_selective_copy(std::span<const std::int64_t> content,
                                  std::span<const std::int64_t> markers, std::int64_t delay,
                                  std::int64_t n_symbols) {
  const auto len = static_cast<std::int64_t>(content.size());
  const auto n_markers = static_cast<std::int64_t>(markers.size());
  const std::int64_t trigger = len + delay;
  Sample s = detail::blank_sample(len + delay + 1 + n_markers, n_symbols + 2, n_symbols);
  for (std::int64_t t = 0; t < len; ++t) {
    detail::set_one(s.input, t, content[static_cast<std::size_t>(t)]);
  }
  for (std::int64_t k = 0; k < n_markers; ++k) {
    const auto pos = markers[static_cast<std::size_t>(k)];
    detail::set_one(s.input, pos, n_symbols);
    detail::set_one(s.target, trigger + 1 + k, content[static_cast<std::size_t>(pos)]);
    s.eval_mask[static_cast<std::size_t>(trigger + 1 + k)] = 1;
  }
  detail::set_one(s.input, trigger, n_symbols + 1);
  return s;
}

inline Dataset gen_selective_copy(const SelectiveCopyConfig& c, Seed seed,
                                  std::size_t threads = default_threads()) {
  require_valid(c);
  Dataset d{c, seed};
  detail::finish_layout(d, selective_copy_channels(c.n_symbols));
  detail::fill_splits(d, c, seed, threads, [&](RngStream& s) {
    const auto content = draw_symbols(s, c.sequence_length, c.n_symbols);
    const auto markers = sorted_subset(s, c.sequence_length, c.n_markers);
    return make_selective_copy(content, markers, c.delay, c.n_symbols);
  });
  return d;
}

inline ChannelLayout associative_recall_channels(std::int64_t n_symbols) {
  const auto n = static_cast<std::size_t>(n_symbols);
  return {{detail::channel("symbol", 0, n, "one-hot key or value; pairs alternate key, value"),
           detail::channel("query", n, 1, "1 on the final step, which shows the queried key")},
          {detail::channel("value", 0, n, "one-hot value bound to the queried key")}};
}

/// Pairs occupy the steps just before the final query step; earlier steps
/// are zero padding.
inline Sample make_associative_recall(std::span<const std::int64_t> keys,
                                      std::span<const std::int64_t> values,
                                      std::int64_t query_pair, std::int64_t sequence_length,
                                      std::int64_t n_symbols) {
  const auto pairs = static_cast<std::int64_t>(keys.size());
  const std::int64_t first = sequence_length - 1 - 2 * pairs;
  Sample s = detail::blank_sample(sequence_length, n_symbols + 1, n_symbols);
  for (std::int64_t k = 0; k < pairs; ++k) {
    detail::set_one(s.input, first + 2 * k, keys[static_cast<std::size_t>(k)]);
    detail::set_one(s.input, first + 2 * k + 1, values[static_cast<std::size_t>(k)]);
  }
  const std::int64_t last = sequence_length - 1;
  detail::set_one(s.input, last, keys[static_cast<std::size_t>(query_pair)]);
  detail::set_one(s.input, last, n_symbols);
  detail::set_one(s.target, last, values[static_cast<std::size_t>(query_pair)]);
  s.eval_mask[static_cast<std::size_t>(last)] = 1;
  return s;
}

inline Dataset gen_associative_recall(const AssociativeRecallConfig& c, Seed seed,
                                      std::size_t threads = default_threads()) {
  require_valid(c);
  Dataset d{c, seed};
  detail::finish_layout(d, associative_recall_channels(c.n_symbols));
  detail::fill_splits(d, c, seed, threads, [&](RngStream& s) {
    const auto keys = sample_without_replacement(s, c.n_symbols, c.num_pairs);
    const auto values = draw_symbols(s, c.num_pairs, c.n_symbols);
    const auto query = static_cast<std::int64_t>(draw_index(s, static_cast<std::uint64_t>(c.num_pairs)));
    return make_associative_recall(keys, values, query, c.sequence_length, c.n_symbols);
  });
  return d;
}

// --- pattern recognition ----------------------------------------------------

inline ChannelLayout discrete_pattern_channels(std::int64_t n_symbols) {
  const auto n = static_cast<std::size_t>(n_symbols);
  return {{detail::channel("symbol", 0, n, "one-hot m(t mod base_length); zero when hidden"),
           detail::channel("mask_flag", n, 1, "1 where the symbol is hidden")},
          {detail::channel("symbol", 0, n, "one-hot hidden symbol at hidden steps")}};
}

/// `hidden` lists the masked positions (any order, distinct).
inline Sample make_discrete_pattern(std::span<const std::int64_t> motif, std::int64_t length,
                                    std::span<const std::int64_t> hidden, std::int64_t n_symbols) {
  const auto base = static_cast<std::int64_t>(motif.size());
  Sample s = detail::blank_sample(length, n_symbols + 1, n_symbols);
  for (std::int64_t t = 0; t < length; ++t) {
    detail::set_one(s.input, t, motif[static_cast<std::size_t>(t % base)]);
  }
  for (auto t : hidden) {
    s.input.row(t).setZero();
    detail::set_one(s.input, t, n_symbols);
    detail::set_one(s.target, t, motif[static_cast<std::size_t>(t % base)]);
    s.eval_mask[static_cast<std::size_t>(t)] = 1;
  }
  return s;
}

inline Dataset gen_discrete_pattern_completion(const DiscretePatternCompletionConfig& c,
                                               Seed seed,
                                               std::size_t threads = default_threads()) {
  require_valid(c);
  Dataset d{c, seed};
  detail::finish_layout(d, discrete_pattern_channels(c.n_symbols));
  const auto n_hidden = masked_count(c.mask_ratio, c.sequence_length);
  detail::fill_splits(d, c, seed, threads, [&](RngStream& s) {
    const auto motif = draw_symbols(s, c.base_length, c.n_symbols);
    const auto hidden = sorted_subset(s, c.sequence_length, n_hidden);
    return make_discrete_pattern(motif, c.sequence_length, hidden, c.n_symbols);
  });
  return d;
}

inline ChannelLayout continuous_pattern_channels() {
  return {{detail::channel("value", 0, 1, "m(t mod base_length); 0 when hidden"),
           detail::channel("mask_flag", 1, 1, "1 where the value is hidden")},
          {detail::channel("value", 0, 1, "hidden motif value at hidden steps")}};
}

inline Sample make_continuous_pattern(std::span<const float> motif, std::int64_t length,
                                      std::span<const std::int64_t> hidden) {
  const auto base = static_cast<std::int64_t>(motif.size());
  Sample s = detail::blank_sample(length, 2, 1);
  for (std::int64_t t = 0; t < length; ++t) {
    s.input(t, 0) = motif[static_cast<std::size_t>(t % base)];
  }
  for (auto t : hidden) {
    s.input(t, 0) = 0.0f;
    s.input(t, 1) = 1.0f;
    s.target(t, 0) = motif[static_cast<std::size_t>(t % base)];
    s.eval_mask[static_cast<std::size_t>(t)] = 1;
  }
  return s;
}

inline Dataset gen_continuous_pattern_completion(const ContinuousPatternCompletionConfig& c,
                                                 Seed seed,
                                                 std::size_t threads = default_threads()) {
  require_valid(c);
  Dataset d{c, seed};
  detail::finish_layout(d, continuous_pattern_channels());
  const auto n_hidden = masked_count(c.mask_ratio, c.sequence_length);
  detail::fill_splits(d, c, seed, threads, [&](RngStream& s) {
    std::vector<float> motif(static_cast<std::size_t>(c.base_length));
    for (auto& v : motif) v = static_cast<float>(draw_uniform(s, -1.0, 1.0));
    const auto hidden = sorted_subset(s, c.sequence_length, n_hidden);
    return make_continuous_pattern(motif, c.sequence_length, hidden);
  });
  return d;
}

inline ChannelLayout induction_heads_channels(std::int64_t n_symbols) {
  const auto n = static_cast<std::size_t>(n_symbols);
  return {{detail::channel("symbol", 0, n, "one-hot s(t); second half repeats the first")},
          {detail::channel("next_symbol", 0, n, "one-hot s(t + 1)")}};
}

/// Sequence = half ++ half. Targets are next tokens, scored on the steps
/// [L/2 - 1, L - 2] whose successor lies in the repeated half.
inline Sample make_induction_heads(std::span<const std::int64_t> half, std::int64_t n_symbols) {
  const auto h = static_cast<std::int64_t>(half.size());
  const std::int64_t length = 2 * h;
  auto symbol = [&](std::int64_t t) { return half[static_cast<std::size_t>(t % h)]; };
  Sample s = detail::blank_sample(length, n_symbols, n_symbols);
  for (std::int64_t t = 0; t < length; ++t) {
    detail::set_one(s.input, t, symbol(t));
    if (t + 1 < length) detail::set_one(s.target, t, symbol(t + 1));
    if (t >= h - 1 && t <= length - 2) s.eval_mask[static_cast<std::size_t>(t)] = 1;
  }
  return s;
}

inline Dataset gen_induction_heads(const InductionHeadsConfig& c, Seed seed,
                                   std::size_t threads = default_threads()) {
  require_valid(c);
  Dataset d{c, seed};
  detail::finish_layout(d, induction_heads_channels(c.n_symbols));
  detail::fill_splits(d, c, seed, threads, [&](RngStream& s) {
    const auto half = draw_symbols(s, c.sequence_length / 2, c.n_symbols);
    return make_induction_heads(half, c.n_symbols);
  });
  return d;
}

// --- reasoning and manipulation -------------------------------------------------

inline ChannelLayout adding_channels(std::int64_t max_number) {
  const auto n = static_cast<std::size_t>(max_number);
  return {{detail::channel("digit", 0, n, "one-hot digit in [0, max_number)"),
           detail::channel("marker", n, 1, "1 on the two digits to add"),
           detail::channel("trigger", n + 1, 1, "1 on the final step")},
          {detail::channel("sum", 0, 2 * n - 1, "one-hot sum of the marked digits")}};
}

inline Sample make_adding(std::span<const std::int64_t> digits,
                          std::span<const std::int64_t> markers, std::int64_t max_number) {
  const auto len = static_cast<std::int64_t>(digits.size());
  Sample s = detail::blank_sample(len + 1, max_number + 2, 2 * max_number - 1);
  for (std::int64_t t = 0; t < len; ++t) {
    detail::set_one(s.input, t, digits[static_cast<std::size_t>(t)]);
  }
  std::int64_t sum = 0;
  for (auto m : markers) {
    detail::set_one(s.input, m, max_number);
    sum += digits[static_cast<std::size_t>(m)];
  }
  detail::set_one(s.input, len, max_number + 1);
  detail::set_one(s.target, len, sum);
  s.eval_mask[static_cast<std::size_t>(len)] = 1;
  return s;
}

inline Dataset gen_adding_problem(const AddingProblemConfig& c, Seed seed,
                                  std::size_t threads = default_threads()) {
  require_valid(c);
  Dataset d{c, seed};
  detail::finish_layout(d, adding_channels(c.max_number));
  detail::fill_splits(d, c, seed, threads, [&](RngStream& s) {
    const auto digits = draw_symbols(s, c.sequence_length, c.max_number);
    const auto markers = sorted_subset(s, c.sequence_length, 2);
    return make_adding(digits, markers, c.max_number);
  });
  return d;
}

inline ChannelLayout sorting_channels(std::int64_t n_symbols, std::int64_t length) {
  const auto n = static_cast<std::size_t>(n_symbols);
  const auto l = static_cast<std::size_t>(length);
  return {{detail::channel("symbol", 0, n, "one-hot symbol, steps [0, L)"),
           detail::channel("position", n, l, "one-hot target position of the symbol"),
           detail::channel("trigger", n + l, 1, "1 at step L")},
          {detail::channel("symbol", 0, n, "symbols ordered by target position, steps (L, 2L]")}};
}

/// `positions` is a permutation of 0..L-1; symbol t belongs at positions[t].
inline Sample make_sorting(std::span<const std::int64_t> symbols,
                           std::span<const std::int64_t> positions, std::int64_t n_symbols) {
  const auto len = static_cast<std::int64_t>(symbols.size());
  Sample s = detail::blank_sample(2 * len + 1, n_symbols + len + 1, n_symbols);
  for (std::int64_t t = 0; t < len; ++t) {
    const auto p = positions[static_cast<std::size_t>(t)];
    detail::set_one(s.input, t, symbols[static_cast<std::size_t>(t)]);
    detail::set_one(s.input, t, n_symbols + p);
    detail::set_one(s.target, len + 1 + p, symbols[static_cast<std::size_t>(t)]);
    s.eval_mask[static_cast<std::size_t>(len + 1 + p)] = 1;
  }
  detail::set_one(s.input, len, n_symbols + len);
  return s;
}

inline Dataset gen_sorting_problem(const SortingProblemConfig& c, Seed seed,
                                   std::size_t threads = default_threads()) {
  require_valid(c);
  Dataset d{c, seed};
  detail::finish_layout(d, sorting_channels(c.n_symbols, c.sequence_length));
  detail::fill_splits(d, c, seed, threads, [&](RngStream& s) {
    const auto symbols = draw_symbols(s, c.sequence_length, c.n_symbols);
    const auto positions = sample_without_replacement(s, c.sequence_length, c.sequence_length);
    return make_sorting(symbols, positions, c.n_symbols);
  });
  return d;
}

/// Balanced iff the running depth never goes negative and ends at zero.
/// `true` is an opening bracket.
inline bool brackets_balanced(std::span<const std::uint8_t> opens) {
  std::int64_t depth = 0;
  for (auto o : opens) {
    depth += o ? 1 : -1;
    if (depth < 0) return false;
  }
  return depth == 0;
}

/// A balanced string of `length` brackets whose depth never exceeds
/// `max_depth`. Free choices open with probability 1/2.
inline std::vector<std::uint8_t> random_balanced_brackets(RngStream& s, std::int64_t length,
                                                          std::int64_t max_depth) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(length));
  std::int64_t depth = 0;
  for (std::int64_t i = 0; i < length; ++i) {
    const std::int64_t remaining = length - i;
    bool open;
    if (depth == remaining) open = false;
    else if (depth == 0) open = true;
    else if (depth >= max_depth) open = false;
    else open = draw_index(s, 2) == 0;
    out[static_cast<std::size_t>(i)] = open ? 1 : 0;
    depth += open ? 1 : -1;
  }
  return out;
}

inline ChannelLayout bracket_channels() {
  return {{detail::channel("open", 0, 1, "1 for '('"), detail::channel("close", 1, 1, "1 for ')'")},
          {detail::channel("label", 0, 2, "one-hot {valid, invalid} at the final step")}};
}

inline Sample make_bracket(std::span<const std::uint8_t> opens) {
  const auto len = static_cast<std::int64_t>(opens.size());
  Sample s = detail::blank_sample(len, 2, 2);
  for (std::int64_t t = 0; t < len; ++t) {
    detail::set_one(s.input, t, opens[static_cast<std::size_t>(t)] ? 0 : 1);
  }
  detail::set_one(s.target, len - 1, brackets_balanced(opens) ? 0 : 1);
  s.eval_mask[static_cast<std::size_t>(len - 1)] = 1;
  return s;
}

inline Dataset gen_bracket_matching(const BracketMatchingConfig& c, Seed seed,
                                    std::size_t threads = default_threads()) {
  require_valid(c);
  Dataset d{c, seed};
  detail::finish_layout(d, bracket_channels());
  detail::fill_splits(d, c, seed, threads, [&](RngStream& s) {
    auto opens = random_balanced_brackets(s, c.sequence_length, c.max_depth);
    if (draw_index(s, 2) == 1) {
      auto& b = opens[draw_index(s, static_cast<std::uint64_t>(c.sequence_length))];
      b = b ? 0 : 1;
    }
    return make_bracket(opens);
  });
  return d;
}

// --- cross situation ------------------------------------------------------------

/// Token vocabulary: the template words, then every content word in order of
/// first appearance across objects, colors and positions. A word listed in
/// two categories (e.g. "orange") is a single token.
struct CrossVocabulary {
  std::vector<std::string> tokens;
  std::map<std::string, std::int64_t> index;

  std::int64_t at(const std::string& w) const { return index.at(w); }
  std::int64_t size() const { return static_cast<std::int64_t>(tokens.size()); }
};

inline CrossVocabulary cross_vocabulary(const CrossSituationConfig& c) {
  CrossVocabulary v;
  auto add = [&](const std::string& w) {
    if (v.index.emplace(w, static_cast<std::int64_t>(v.tokens.size())).second) v.tokens.push_back(w);
  };
  for (const char* w : {"the", "is", "on", "and"}) add(w);
  for (const auto* groups : {&c.objects, &c.colors, &c.positions}) {
    for (const auto& g : *groups) {
      for (const auto& w : g) add(w);
    }
  }
  return v;
}

struct Situation {
  std::int64_t object = 0;
  std::int64_t color = 0;
  std::int64_t position = 0;
  friend bool operator==(const Situation&, const Situation&) = default;
};

/// Which synonym each slot uses, per situation: color, object, position.
struct SituationWording {
  std::int64_t color_word = 0;
  std::int64_t object_word = 0;
  std::int64_t position_word = 0;
};

inline constexpr std::int64_t kCrossSentenceLength = 15;

inline SlotLayout cross_slot_layout(const CrossSituationConfig& c) {
  const auto no = c.objects.size();
  const auto nc = c.colors.size();
  const auto np = c.positions.size();
  SlotLayout out;
  std::size_t off = 0;
  for (int k = 0; k < 2; ++k) {
    out.push_back({off, no});
    off += no;
    out.push_back({off, nc});
    off += nc;
    out.push_back({off, np});
    off += np;
  }
  return out;
}

inline ChannelLayout cross_channels(const CrossSituationConfig& c, const CrossVocabulary& v) {
  std::string words;
  for (const auto& t : v.tokens) words += (words.empty() ? "" : " ") + t;
  const auto no = c.objects.size();
  const auto nc = c.colors.size();
  const auto np = c.positions.size();
  ChannelLayout l;
  l.input.push_back(detail::channel("token", 0, v.tokens.size(), "one-hot word over: " + words));
  std::size_t off = 0;
  for (int k = 0; k < 2; ++k) {
    const std::string which = k == 0 ? "first" : "second";
    l.output.push_back(detail::channel(which + "_object", off, no,
                                       "object label of the " + which + " situation by position label"));
    off += no;
    l.output.push_back(detail::channel(which + "_color", off, nc, "color label"));
    off += nc;
    l.output.push_back(detail::channel(which + "_position", off, np, "position label"));
    off += np;
  }
  return l;
}

/// Sentence "the C O is on the P and the C O is on the P"; the final step is
/// scored against both situations ordered by position label.
inline Sample make_cross_situation(const CrossSituationConfig& c, const CrossVocabulary& v,
                                   std::span<const Situation, 2> situations,
                                   std::span<const SituationWording, 2> wording) {
  const auto no = static_cast<std::int64_t>(c.objects.size());
  const auto nc = static_cast<std::int64_t>(c.colors.size());
  const auto np = static_cast<std::int64_t>(c.positions.size());
  Sample s = detail::blank_sample(kCrossSentenceLength, v.size(), 2 * (no + nc + np));
  std::int64_t t = 0;
  auto emit = [&](const std::string& w) { detail::set_one(s.input, t++, v.at(w)); };
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& sit = situations[k];
    const auto& w = wording[k];
    if (k == 1) emit("and");
    emit("the");
    emit(c.colors[static_cast<std::size_t>(sit.color)][static_cast<std::size_t>(w.color_word)]);
    emit(c.objects[static_cast<std::size_t>(sit.object)][static_cast<std::size_t>(w.object_word)]);
    emit("is");
    emit("on");
    emit("the");
    emit(c.positions[static_cast<std::size_t>(sit.position)][static_cast<std::size_t>(w.position_word)]);
  }
  const std::int64_t last = kCrossSentenceLength - 1;
  std::array<Situation, 2> ordered = {situations[0], situations[1]};
  if (ordered[1].position < ordered[0].position) std::swap(ordered[0], ordered[1]);
  std::int64_t off = 0;
  for (const auto& sit : ordered) {
    detail::set_one(s.target, last, off + sit.object);
    off += no;
    detail::set_one(s.target, last, off + sit.color);
    off += nc;
    detail::set_one(s.target, last, off + sit.position);
    off += np;
  }
  s.eval_mask[static_cast<std::size_t>(last)] = 1;
  s.slot_layout = cross_slot_layout(c);
  return s;
}

inline Dataset gen_cross_situation(const CrossSituationConfig& c, Seed seed,
                                   std::size_t threads = default_threads()) {
  require_valid(c);
  const auto vocab = cross_vocabulary(c);
  Dataset d{c, seed};
  detail::finish_layout(d, cross_channels(c, vocab));
  d.slot_layout = cross_slot_layout(c);
  const auto no = static_cast<std::int64_t>(c.objects.size());
  const auto nc = static_cast<std::int64_t>(c.colors.size());
  const auto np = static_cast<std::int64_t>(c.positions.size());
  detail::fill_splits(d, c, seed, threads, [&](RngStream& s) {
    const auto objects = sample_without_replacement(s, no, 2);
    const auto colors = draw_symbols(s, 2, nc);
    const auto positions = sample_without_replacement(s, np, 2);
    std::array<Situation, 2> sits;
    std::array<SituationWording, 2> words;
    for (std::size_t k = 0; k < 2; ++k) {
      sits[k] = {objects[k], colors[k], positions[k]};
      auto pick = [&](const LabelGroups& g, std::int64_t label) {
        return static_cast<std::int64_t>(draw_index(s, g[static_cast<std::size_t>(label)].size()));
      };
      words[k].color_word = pick(c.colors, sits[k].color);
      words[k].object_word = pick(c.objects, sits[k].object);
      words[k].position_word = pick(c.positions, sits[k].position);
    }
    return make_cross_situation(c, vocab, std::span<const Situation, 2>(sits),
                                std::span<const SituationWording, 2>(words));
  });
  return d;
}

// --- dispatch -------------------------------------------------------------------

inline Dataset generate(const TaskConfig& config, Seed seed,
                        std::size_t threads = default_threads()) {
  return std::visit(
      [&](const auto& c) -> Dataset {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, SinusForecastingConfig>) return gen_sinus(c, seed);
        else if constexpr (std::is_same_v<C, ChaoticForecastingConfig>) return gen_chaotic(c, seed);
        else if constexpr (std::is_same_v<C, DiscretePostcastingConfig>) return gen_discrete_postcasting(c, seed, threads);
        else if constexpr (std::is_same_v<C, ContinuousPostcastingConfig>) return gen_continuous_postcasting(c, seed, threads);
        else if constexpr (std::is_same_v<C, SimpleCopyConfig>) return gen_simple_copy(c, seed, threads);
        else if constexpr (std::is_same_v<C, SelectiveCopyConfig>) return gen_selective_copy(c, seed, threads);
        else if constexpr (std::is_same_v<C, AssociativeRecallConfig>) return gen_associative_recall(c, seed, threads);
        else if constexpr (std::is_same_v<C, DiscretePatternCompletionConfig>) return gen_discrete_pattern_completion(c, seed, threads);
        else if constexpr (std::is_same_v<C, ContinuousPatternCompletionConfig>) return gen_continuous_pattern_completion(c, seed, threads);
        else if constexpr (std::is_same_v<C, InductionHeadsConfig>) return gen_induction_heads(c, seed, threads);
        else if constexpr (std::is_same_v<C, AddingProblemConfig>) return gen_adding_problem(c, seed, threads);
        else if constexpr (std::is_same_v<C, SortingProblemConfig>) return gen_sorting_problem(c, seed, threads);
        else if constexpr (std::is_same_v<C, BracketMatchingConfig>) return gen_bracket_matching(c, seed, threads);
        else return gen_cross_situation(c, seed, threads);
      },
      config);
}

inline Dataset generate(TaskId task, Difficulty difficulty, Seed seed,
                        std::size_t threads = default_threads()) {
  return generate(preset(task, difficulty), seed, threads);
}

}  // namespace cogscale
