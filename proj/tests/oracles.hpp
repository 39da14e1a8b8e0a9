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

// Brute-force reference checks shared by the unit tests and the acceptance
// binary. Each oracle decodes a generated sample back into plain integers
// from its input alone, recomputes what the target and mask must be with
// naive loops, and reports the first disagreement. None of them call the
// generator's builders.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cogscale/cogscale.hpp"

namespace oracle {

namespace cs = cogscale;

using Problems = std::vector<std::string>;

inline float at(const cs::Matrix& m, std::int64_t r, std::int64_t c) {
  return m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
}

/// Column of the single 1 among columns [lo, lo + width) of row r, -1 if
/// the range is all zero, -2 if it is not a clean one-hot.
inline std::int64_t hot(const cs::Matrix& m, std::int64_t r, std::int64_t lo, std::int64_t width) {
  std::int64_t found = -1;
  for (std::int64_t c = 0; c < width; ++c) {
    const float v = at(m, r, lo + c);
    if (v == 0.0f) continue;
    if (v != 1.0f || found != -1) return -2;
    found = c;
  }
  return found;
}

inline bool row_zero(const cs::Matrix& m, std::int64_t r, std::int64_t lo = 0, std::int64_t hi = -1) {
  if (hi < 0) hi = m.cols();
  for (std::int64_t c = lo; c < hi; ++c) {
    if (at(m, r, c) != 0.0f) return false;
  }
  return true;
}

class Checker {
 public:
  explicit Checker(const cs::Sample& s) : s_(s) {}

  void expect(bool ok, const std::string& what) {
    if (!ok && problems_.size() < 8) problems_.push_back(what);
  }
  void shape(std::int64_t steps, std::int64_t d_in, std::int64_t d_out) {
    expect(s_.input.rows() == steps && s_.target.rows() == steps &&
               static_cast<std::int64_t>(s_.eval_mask.size()) == steps,
           "step count " + std::to_string(s_.input.rows()) + ", want " + std::to_string(steps));
    expect(s_.input.cols() == d_in, "d_in " + std::to_string(s_.input.cols()));
    expect(s_.target.cols() == d_out, "d_out " + std::to_string(s_.target.cols()));
  }
  /// Compares the whole target and mask against the expected ones.
  void targets(const cs::Matrix& want, const std::vector<std::uint8_t>& mask) {
    if (want.rows() != s_.target.rows() || want.cols() != s_.target.cols()) {
      expect(false, "target shape");
      return;
    }
    for (Eigen::Index t = 0; t < want.rows(); ++t) {
      const bool m = s_.eval_mask[static_cast<std::size_t>(t)] != 0;
      expect(m == (mask[static_cast<std::size_t>(t)] != 0), "mask at step " + std::to_string(t));
      for (Eigen::Index c = 0; c < want.cols(); ++c) {
        if (want(t, c) != s_.target(t, c)) {
          expect(false, "target (" + std::to_string(t) + ", " + std::to_string(c) + ")");
        }
      }
    }
  }
  bool ok() const { return problems_.empty(); }
  Problems take() { return std::move(problems_); }

 private:
  const cs::Sample& s_;
  Problems problems_;
};

inline cs::Matrix zeros(std::int64_t r, std::int64_t c) {
  return cs::Matrix::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
}

// --- per-task oracles ------------------------------------------------------

/// Shift oracle for forecasting: glue the three splits back into one
/// timeline; target at t must equal the input at t + h, unmasked past the end.
template <class C>
Problems check_forecast(const C& c, const cs::Dataset& d) {
  Problems out;
  std::vector<std::vector<float>> line;
  std::vector<const cs::Sample*> parts = {&d.train.at(0), &d.valid.at(0), &d.test.at(0)};
  if (d.train.size() != 1 || d.valid.size() != 1 || d.test.size() != 1) out.push_back("split counts");
  for (const auto* s : parts) {
    for (Eigen::Index r = 0; r < s->input.rows(); ++r) {
      std::vector<float> row(static_cast<std::size_t>(s->input.cols()));
      for (Eigen::Index k = 0; k < s->input.cols(); ++k) row[static_cast<std::size_t>(k)] = s->input(r, k);
      line.push_back(row);
    }
  }
  const auto len = static_cast<std::int64_t>(line.size());
  if (len != c.sequence_length) out.push_back("timeline length " + std::to_string(len));
  std::int64_t base = 0;
  for (const auto* s : parts) {
    for (Eigen::Index r = 0; r < s->input.rows(); ++r) {
      const std::int64_t t = base + r;
      const bool want_mask = t + c.forecast_length < len;
      if ((s->eval_mask[static_cast<std::size_t>(r)] != 0) != want_mask) {
        out.push_back("mask at global step " + std::to_string(t));
      }
      for (Eigen::Index k = 0; k < s->target.cols(); ++k) {
        const float want = want_mask ? line[static_cast<std::size_t>(t + c.forecast_length)][static_cast<std::size_t>(k)] : 0.0f;
        if (s->target(r, k) != want) out.push_back("target at global step " + std::to_string(t));
      }
    }
    base += s->input.rows();
    if (out.size() > 8) break;
  }
  return out;
}

inline Problems check(const cs::DiscretePostcastingConfig& c, const cs::Sample& s) {
  Checker k(s);
  const auto n = c.n_symbols, L = c.sequence_length;
  k.shape(L, n, n);
  if (!k.ok()) return k.take();
  std::vector<std::int64_t> sym(static_cast<std::size_t>(L));
  for (std::int64_t t = 0; t < L; ++t) {
    sym[static_cast<std::size_t>(t)] = hot(s.input, t, 0, n);
    k.expect(sym[static_cast<std::size_t>(t)] >= 0, "input not one-hot at " + std::to_string(t));
  }
  if (!k.ok()) return k.take();
  auto want = zeros(L, n);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(L), 0);
  for (std::int64_t t = c.delay; t < L; ++t) {
    want(t, sym[static_cast<std::size_t>(t - c.delay)]) = 1.0f;
    mask[static_cast<std::size_t>(t)] = 1;
  }
  k.targets(want, mask);
  return k.take();
}

inline Problems check(const cs::ContinuousPostcastingConfig& c, const cs::Sample& s) {
  Checker k(s);
  const auto L = c.sequence_length;
  k.shape(L, 1, 1);
  if (!k.ok()) return k.take();
  auto want = zeros(L, 1);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(L), 0);
  for (std::int64_t t = 0; t < L; ++t) {
    const float v = at(s.input, t, 0);
    k.expect(v >= -0.8f && v <= 0.8f, "value out of range at " + std::to_string(t));
    if (t >= c.delay) {
      want(t, 0) = at(s.input, t - c.delay, 0);
      mask[static_cast<std::size_t>(t)] = 1;
    }
  }
  k.targets(want, mask);
  return k.take();
}

/// Replay oracle: content on [0, L), silence, trigger at L + delay, then the
/// content again on the last L steps.
inline Problems check(const cs::SimpleCopyConfig& c, const cs::Sample& s) {
  Checker k(s);
  const auto n = c.n_symbols, L = c.sequence_length, T = 2 * L + c.delay + 1;
  k.shape(T, n + 1, n);
  if (!k.ok()) return k.take();
  std::vector<std::int64_t> content;
  for (std::int64_t t = 0; t < T; ++t) {
    const auto sym = hot(s.input, t, 0, n);
    const bool trig = at(s.input, t, n) == 1.0f;
    if (t < L) {
      k.expect(sym >= 0 && !trig, "content step " + std::to_string(t));
      content.push_back(sym);
    } else if (t == L + c.delay) {
      k.expect(sym == -1 && trig, "trigger step");
    } else {
      k.expect(row_zero(s.input, t), "input not silent at " + std::to_string(t));
    }
  }
  if (!k.ok()) return k.take();
  auto want = zeros(T, n);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(T), 0);
  for (std::int64_t i = 0; i < L; ++i) {
    const std::int64_t t = T - L + i;
    want(t, content[static_cast<std::size_t>(i)]) = 1.0f;
    mask[static_cast<std::size_t>(t)] = 1;
  }
  k.targets(want, mask);
  return k.take();
}

/// Filter oracle: the marked content symbols, in position order.
inline Problems check(const cs::SelectiveCopyConfig& c, const cs::Sample& s) {
  Checker k(s);
  const auto n = c.n_symbols, L = c.sequence_length, M = c.n_markers;
  const auto T = L + c.delay + 1 + M;
  k.shape(T, n + 2, n);
  if (!k.ok()) return k.take();
  std::vector<std::int64_t> kept;
  for (std::int64_t t = 0; t < T; ++t) {
    const auto sym = hot(s.input, t, 0, n);
    const float mark = at(s.input, t, n);
    const float trig = at(s.input, t, n + 1);
    if (t < L) {
      k.expect(sym >= 0 && (mark == 0.0f || mark == 1.0f) && trig == 0.0f, "content step " + std::to_string(t));
      if (mark == 1.0f) kept.push_back(sym);
    } else if (t == L + c.delay) {
      k.expect(sym == -1 && mark == 0.0f && trig == 1.0f, "trigger step");
    } else {
      k.expect(row_zero(s.input, t), "input not silent at " + std::to_string(t));
    }
  }
  k.expect(static_cast<std::int64_t>(kept.size()) == M, "marker count " + std::to_string(kept.size()));
  if (!k.ok()) return k.take();
  auto want = zeros(T, n);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(T), 0);
  for (std::int64_t i = 0; i < M; ++i) {
    const std::int64_t t = T - M + i;
    want(t, kept[static_cast<std::size_t>(i)]) = 1.0f;
    mask[static_cast<std::size_t>(t)] = 1;
  }
  k.targets(want, mask);
  return k.take();
}

/// Lookup oracle: read (key, value) pairs off the tail of the sequence and
/// answer the query from a plain map.
inline Problems check(const cs::AssociativeRecallConfig& c, const cs::Sample& s) {
  Checker k(s);
  const auto n = c.n_symbols, L = c.sequence_length, P = c.num_pairs;
  k.shape(L, n + 1, n);
  if (!k.ok()) return k.take();
  const std::int64_t first = L - 1 - 2 * P;
  for (std::int64_t t = 0; t < first; ++t) k.expect(row_zero(s.input, t), "padding at " + std::to_string(t));
  std::map<std::int64_t, std::int64_t> table;
  for (std::int64_t p = 0; p < P; ++p) {
    const auto key = hot(s.input, first + 2 * p, 0, n);
    const auto val = hot(s.input, first + 2 * p + 1, 0, n);
    k.expect(key >= 0 && val >= 0, "pair " + std::to_string(p) + " not one-hot");
    k.expect(at(s.input, first + 2 * p, n) == 0.0f && at(s.input, first + 2 * p + 1, n) == 0.0f,
             "query flag inside pairs");
    k.expect(table.emplace(key, val).second, "duplicate key " + std::to_string(key));
  }
  const auto q = hot(s.input, L - 1, 0, n);
  k.expect(at(s.input, L - 1, n) == 1.0f, "query flag missing");
  k.expect(table.count(q) == 1, "query key not among the pairs");
  if (!k.ok()) return k.take();
  auto want = zeros(L, n);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(L), 0);
  want(L - 1, table.at(q)) = 1.0f;
  mask[static_cast<std::size_t>(L - 1)] = 1;
  k.targets(want, mask);
  return k.take();
}

/// Modular-index oracle shared by both pattern tasks. `visible(t)` returns
/// the value shown at t (nullopt when hidden); hidden targets must equal
/// every visible value with the same index mod base_length.
template <class Visible, class Target>
void check_periodic(Checker& k, std::int64_t L, std::int64_t base, std::int64_t want_hidden,
                    const cs::Sample& s, Visible visible, Target target) {
  std::map<std::int64_t, double> residue;
  std::vector<std::int64_t> hidden;
  for (std::int64_t t = 0; t < L; ++t) {
    const auto v = visible(t);
    if (!v) {
      hidden.push_back(t);
      continue;
    }
    auto [it, fresh] = residue.emplace(t % base, *v);
    k.expect(fresh || it->second == *v, "visible values not periodic at " + std::to_string(t));
    k.expect(s.eval_mask[static_cast<std::size_t>(t)] == 0, "visible step masked at " + std::to_string(t));
    k.expect(row_zero(s.target, t), "visible step has a target at " + std::to_string(t));
  }
  k.expect(static_cast<std::int64_t>(hidden.size()) == want_hidden,
           "hidden count " + std::to_string(hidden.size()) + ", want " + std::to_string(want_hidden));
  for (auto t : hidden) {
    k.expect(s.eval_mask[static_cast<std::size_t>(t)] == 1, "hidden step unmasked at " + std::to_string(t));
    const auto got = target(t);
    k.expect(got.has_value(), "bad target at hidden step " + std::to_string(t));
    if (!got) continue;
    if (auto it = residue.find(t % base); it != residue.end()) {
      k.expect(it->second == *got, "hidden target disagrees with its period at " + std::to_string(t));
    }
    auto [it, fresh] = residue.emplace(t % base, *got);
    k.expect(fresh || it->second == *got, "hidden targets disagree at " + std::to_string(t));
  }
}

inline std::int64_t hidden_count(double ratio, std::int64_t L) {
  // ceil(ratio * L) computed in exact rational steps for ratios with few decimals.
  const auto scaled = static_cast<std::int64_t>(std::llround(ratio * 1e6)) * L;
  return (scaled + 999999) / 1000000;
}

inline Problems check(const cs::DiscretePatternCompletionConfig& c, const cs::Sample& s) {
  Checker k(s);
  const auto n = c.n_symbols, L = c.sequence_length;
  k.shape(L, n + 1, n);
  if (!k.ok()) return k.take();
  check_periodic(
      k, L, c.base_length, hidden_count(c.mask_ratio, L), s,
      [&](std::int64_t t) -> std::optional<double> {
        if (at(s.input, t, n) == 1.0f) {
          k.expect(row_zero(s.input, t, 0, n), "hidden step shows a symbol");
          return std::nullopt;
        }
        const auto v = hot(s.input, t, 0, n);
        k.expect(v >= 0, "visible step not one-hot at " + std::to_string(t));
        return static_cast<double>(v);
      },
      [&](std::int64_t t) -> std::optional<double> {
        const auto v = hot(s.target, t, 0, n);
        if (v < 0) return std::nullopt;
        return static_cast<double>(v);
      });
  return k.take();
}

inline Problems check(const cs::ContinuousPatternCompletionConfig& c, const cs::Sample& s) {
  Checker k(s);
  const auto L = c.sequence_length;
  k.shape(L, 2, 1);
  if (!k.ok()) return k.take();
  check_periodic(
      k, L, c.base_length, hidden_count(c.mask_ratio, L), s,
      [&](std::int64_t t) -> std::optional<double> {
        if (at(s.input, t, 1) == 1.0f) {
          k.expect(at(s.input, t, 0) == 0.0f, "hidden step shows a value");
          return std::nullopt;
        }
        k.expect(at(s.input, t, 1) == 0.0f, "mask flag not 0/1");
        return at(s.input, t, 0);
      },
      [&](std::int64_t t) -> std::optional<double> { return at(s.target, t, 0); });
  return k.take();
}

/// Half-copy oracle: the second half repeats the first; targets are next
/// symbols, scored from the last step of the first half on.
inline Problems check(const cs::InductionHeadsConfig& c, const cs::Sample& s) {
  Checker k(s);
  const auto n = c.n_symbols, L = c.sequence_length, h = L / 2;
  k.shape(L, n, n);
  if (!k.ok()) return k.take();
  std::vector<std::int64_t> sym;
  for (std::int64_t t = 0; t < L; ++t) {
    sym.push_back(hot(s.input, t, 0, n));
    k.expect(sym.back() >= 0, "input not one-hot at " + std::to_string(t));
  }
  for (std::int64_t t = h; t < L; ++t) {
    k.expect(sym[static_cast<std::size_t>(t)] == sym[static_cast<std::size_t>(t - h)],
             "second half differs at " + std::to_string(t));
  }
  if (!k.ok()) return k.take();
  auto want = zeros(L, n);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(L), 0);
  for (std::int64_t t = 0; t + 1 < L; ++t) {
    want(t, sym[static_cast<std::size_t>(t + 1)]) = 1.0f;
    if (t >= h - 1) mask[static_cast<std::size_t>(t)] = 1;
  }
  k.targets(want, mask);
  return k.take();
}

/// Sum oracle: exactly two marked digits; the answer is their sum.
inline Problems check(const cs::AddingProblemConfig& c, const cs::Sample& s) {
  Checker k(s);
  const auto n = c.max_number, L = c.sequence_length;
  k.shape(L + 1, n + 2, 2 * n - 1);
  if (!k.ok()) return k.take();
  std::int64_t sum = 0;
  int marks = 0;
  for (std::int64_t t = 0; t < L; ++t) {
    const auto d = hot(s.input, t, 0, n);
    k.expect(d >= 0, "digit not one-hot at " + std::to_string(t));
    k.expect(at(s.input, t, n + 1) == 0.0f, "trigger before the end");
    if (at(s.input, t, n) == 1.0f) {
      sum += d;
      ++marks;
    } else {
      k.expect(at(s.input, t, n) == 0.0f, "marker not 0/1");
    }
  }
  k.expect(marks == 2, "marker count " + std::to_string(marks));
  k.expect(row_zero(s.input, L, 0, n + 1) && at(s.input, L, n + 1) == 1.0f, "final trigger step");
  if (!k.ok()) return k.take();
  auto want = zeros(L + 1, 2 * n - 1);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(L + 1), 0);
  want(L, sum) = 1.0f;
  mask[static_cast<std::size_t>(L)] = 1;
  k.targets(want, mask);
  return k.take();
}

/// Inverse-permutation oracle: symbol t goes to output slot positions[t].
inline Problems check(const cs::SortingProblemConfig& c, const cs::Sample& s) {
  Checker k(s);
  const auto n = c.n_symbols, L = c.sequence_length, T = 2 * L + 1;
  k.shape(T, n + L + 1, n);
  if (!k.ok()) return k.take();
  std::vector<std::int64_t> slot_symbol(static_cast<std::size_t>(L), -1);
  for (std::int64_t t = 0; t < L; ++t) {
    const auto sym = hot(s.input, t, 0, n);
    const auto pos = hot(s.input, t, n, L);
    k.expect(sym >= 0 && pos >= 0 && at(s.input, t, n + L) == 0.0f, "input step " + std::to_string(t));
    if (sym < 0 || pos < 0) continue;
    k.expect(slot_symbol[static_cast<std::size_t>(pos)] == -1, "position used twice");
    slot_symbol[static_cast<std::size_t>(pos)] = sym;
  }
  k.expect(row_zero(s.input, L, 0, n + L) && at(s.input, L, n + L) == 1.0f, "trigger step");
  for (std::int64_t t = L + 1; t < T; ++t) k.expect(row_zero(s.input, t), "input after trigger");
  if (!k.ok()) return k.take();
  auto want = zeros(T, n);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(T), 0);
  for (std::int64_t p = 0; p < L; ++p) {
    want(L + 1 + p, slot_symbol[static_cast<std::size_t>(p)]) = 1.0f;
    mask[static_cast<std::size_t>(L + 1 + p)] = 1;
  }
  k.targets(want, mask);
  return k.take();
}

/// Stack oracle: push on '(' and pop on ')'; valid iff no pop hits an empty
/// stack and the stack ends empty.
inline Problems check(const cs::BracketMatchingConfig& c, const cs::Sample& s) {
  Checker k(s);
  const auto L = c.sequence_length;
  k.shape(L, 2, 2);
  if (!k.ok()) return k.take();
  std::vector<char> stack;
  bool valid = true;
  for (std::int64_t t = 0; t < L; ++t) {
    const auto b = hot(s.input, t, 0, 2);
    k.expect(b >= 0, "bracket not one-hot at " + std::to_string(t));
    if (b == 0) {
      stack.push_back('(');
    } else if (stack.empty()) {
      valid = false;
    } else {
      stack.pop_back();
    }
  }
  valid = valid && stack.empty();
  if (!k.ok()) return k.take();
  auto want = zeros(L, 2);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(L), 0);
  want(L - 1, valid ? 0 : 1) = 1.0f;
  mask[static_cast<std::size_t>(L - 1)] = 1;
  k.targets(want, mask);
  return k.take();
}

/// Round-trip oracle: decode the token stream back into words, parse the
/// fixed sentence and rebuild the label vector from the parsed words.
inline Problems check(const cs::CrossSituationConfig& c, const cs::Sample& s) {
  Checker k(s);
  std::vector<std::string> vocab = {"the", "is", "on", "and"};
  auto add = [&](const std::string& w) {
    if (std::find(vocab.begin(), vocab.end(), w) == vocab.end()) vocab.push_back(w);
  };
  for (const auto* g : {&c.objects, &c.colors, &c.positions}) {
    for (const auto& syn : *g) {
      for (const auto& w : syn) add(w);
    }
  }
  auto label_of = [](const cs::LabelGroups& g, const std::string& w) -> std::int64_t {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (std::find(g[i].begin(), g[i].end(), w) != g[i].end()) return static_cast<std::int64_t>(i);
    }
    return -1;
  };
  const auto no = static_cast<std::int64_t>(c.objects.size());
  const auto nc = static_cast<std::int64_t>(c.colors.size());
  const auto np = static_cast<std::int64_t>(c.positions.size());
  const std::int64_t T = 15;
  k.shape(T, static_cast<std::int64_t>(vocab.size()), 2 * (no + nc + np));
  if (!k.ok()) return k.take();
  std::vector<std::string> words;
  for (std::int64_t t = 0; t < T; ++t) {
    const auto i = hot(s.input, t, 0, static_cast<std::int64_t>(vocab.size()));
    k.expect(i >= 0, "token not one-hot at " + std::to_string(t));
    words.push_back(i >= 0 ? vocab[static_cast<std::size_t>(i)] : "?");
  }
  if (!k.ok()) return k.take();
  struct Parsed {
    std::int64_t object, color, position;
  };
  std::vector<Parsed> sits;
  for (int half = 0; half < 2; ++half) {
    const std::size_t o = half == 0 ? 0 : 8;
    if (half == 1) k.expect(words[7] == "and", "missing 'and'");
    k.expect(words[o] == "the" && words[o + 3] == "is" && words[o + 4] == "on" && words[o + 5] == "the",
             "template words of clause " + std::to_string(half));
    sits.push_back({label_of(c.objects, words[o + 2]), label_of(c.colors, words[o + 1]),
                    label_of(c.positions, words[o + 6])});
    k.expect(sits.back().object >= 0 && sits.back().color >= 0 && sits.back().position >= 0,
             "unparseable clause " + std::to_string(half));
  }
  if (!k.ok()) return k.take();
  k.expect(sits[0].object != sits[1].object, "objects repeat");
  k.expect(sits[0].position != sits[1].position, "positions repeat");
  if (sits[1].position < sits[0].position) std::swap(sits[0], sits[1]);
  auto want = zeros(T, 2 * (no + nc + np));
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(T), 0);
  std::int64_t off = 0;
  for (const auto& p : sits) {
    want(T - 1, off + p.object) = 1.0f;
    want(T - 1, off + no + p.color) = 1.0f;
    want(T - 1, off + no + nc + p.position) = 1.0f;
    off += no + nc + np;
  }
  mask[static_cast<std::size_t>(T - 1)] = 1;
  k.targets(want, mask);
  k.expect(s.slot_layout.has_value() && s.slot_layout->size() == 6, "slot layout");
  return k.take();
}

/// Runs the matching oracle on every sample of `d`.
inline Problems check_dataset(const cs::TaskConfig& config, const cs::Dataset& d) {
  return std::visit(
      [&](const auto& c) -> Problems {
        using C = std::decay_t<decltype(c)>;
        if constexpr (cs::ForecastingConfig<C>) {
          return check_forecast(c, d);
        } else {
          Problems out;
          const std::array<std::int64_t, 3> counts = {c.n_train, c.n_valid, c.n_test};
          for (std::size_t k = 0; k < 3; ++k) {
            const auto& split = d.split(cs::kAllSplits[k]);
            if (static_cast<std::int64_t>(split.size()) != counts[k]) out.push_back("split size");
            for (std::size_t i = 0; i < split.size() && out.empty(); ++i) {
              for (auto& p : check(c, split[i])) {
                out.push_back(std::string(cs::split_name(cs::kAllSplits[k])) + "[" + std::to_string(i) + "]: " + p);
              }
            }
          }
          return out;
        }
      },
      config);
}

// --- random valid configs ------------------------------------------------------

/// Random small configs that satisfy every invariant. Sizes stay small so
/// that thousands of datasets generate in seconds.
class ConfigSampler {
 public:
  explicit ConfigSampler(std::uint64_t seed) : rng_(seed) {}

  std::int64_t uni(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  template <class C>
  void counts(C& c) {
    c.n_train = uni(1, 3);
    c.n_valid = uni(1, 2);
    c.n_test = uni(1, 3);
  }

  cs::TaskConfig draw(cs::TaskId task) {
    using cs::TaskId;
    switch (task) {
      case TaskId::kSinusForecasting:
      case TaskId::kChaoticForecasting: {
        const auto L = uni(20, 300);
        const double tr = real(0.2, 0.6);
        const double va = real(0.1, 0.2);
        auto fill = [&](auto c) {
          c.sequence_length = L;
          c.forecast_length = uni(0, 15);
          c.training_ratio = tr;
          c.validation_ratio = va;
          c.testing_ratio = 1.0 - tr - va;
          return c;
        };
        if (task == TaskId::kSinusForecasting) return fill(cs::SinusForecastingConfig{});
        return fill(cs::ChaoticForecastingConfig{});
      }
      case TaskId::kDiscretePostcasting: {
        cs::DiscretePostcastingConfig c;
        counts(c);
        c.sequence_length = uni(1, 80);
        c.delay = uni(0, c.sequence_length - 1);
        c.n_symbols = uni(2, 10);
        return c;
      }
      case TaskId::kContinuousPostcasting: {
        cs::ContinuousPostcastingConfig c;
        counts(c);
        c.sequence_length = uni(1, 80);
        c.delay = uni(0, c.sequence_length - 1);
        return c;
      }
      case TaskId::kSimpleCopy: {
        cs::SimpleCopyConfig c;
        counts(c);
        c.sequence_length = uni(1, 40);
        c.delay = uni(0, c.sequence_length - 1);
        c.n_symbols = uni(2, 10);
        return c;
      }
      case TaskId::kSelectiveCopy: {
        cs::SelectiveCopyConfig c;
        counts(c);
        c.sequence_length = uni(1, 60);
        c.delay = uni(0, c.sequence_length - 1);
        c.n_markers = uni(1, c.sequence_length);
        c.n_symbols = uni(2, 10);
        return c;
      }
      case TaskId::kAssociativeRecall: {
        cs::AssociativeRecallConfig c;
        counts(c);
        c.n_symbols = uni(2, 16);
        c.num_pairs = uni(1, c.n_symbols);
        c.sequence_length = uni(2 * c.num_pairs + 1, 2 * c.num_pairs + 20);
        return c;
      }
      case TaskId::kDiscretePatternCompletion: {
        cs::DiscretePatternCompletionConfig c;
        counts(c);
        c.sequence_length = uni(1, 150);
        c.base_length = uni(1, std::min<std::int64_t>(12, c.sequence_length));
        c.n_symbols = uni(2, 10);
        c.mask_ratio = static_cast<double>(uni(1, 9)) / 10.0;
        return c;
      }
      case TaskId::kContinuousPatternCompletion: {
        cs::ContinuousPatternCompletionConfig c;
        counts(c);
        c.sequence_length = uni(1, 150);
        c.base_length = uni(1, std::min<std::int64_t>(12, c.sequence_length));
        c.mask_ratio = static_cast<double>(uni(1, 9)) / 10.0;
        return c;
      }
      case TaskId::kInductionHeads: {
        cs::InductionHeadsConfig c;
        counts(c);
        c.sequence_length = 2 * uni(1, 50);
        c.n_symbols = uni(2, 10);
        return c;
      }
      case TaskId::kAddingProblem: {
        cs::AddingProblemConfig c;
        counts(c);
        c.sequence_length = uni(3, 30);
        c.max_number = uni(2, 10);
        return c;
      }
      case TaskId::kSortingProblem: {
        cs::SortingProblemConfig c;
        counts(c);
        c.sequence_length = uni(1, 25);
        c.n_symbols = uni(2, 10);
        return c;
      }
      case TaskId::kBracketMatching: {
        cs::BracketMatchingConfig c;
        counts(c);
        c.sequence_length = 2 * uni(1, 60);
        c.max_depth = uni(1, 12);
        return c;
      }
      case TaskId::kCrossSituation: {
        cs::CrossSituationConfig c;
        counts(c);
        int word = 0;
        auto groups = [&](std::int64_t lo, std::int64_t hi) {
          cs::LabelGroups g(static_cast<std::size_t>(uni(lo, hi)));
          for (auto& syn : g) {
            const auto k = uni(1, 3) == 3 ? 2 : 1;
            for (std::int64_t i = 0; i < k; ++i) syn.push_back("w" + std::to_string(word++));
          }
          return g;
        };
        c.objects = groups(2, 5);
        c.colors = groups(2, 5);
        c.positions = groups(2, 4);
        // Occasionally reuse an object word as a color, like "orange".
        if (uni(0, 3) == 0) c.colors[0][0] = c.objects[1][0];
        return c;
      }
    }
    return cs::SimpleCopyConfig{};
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
