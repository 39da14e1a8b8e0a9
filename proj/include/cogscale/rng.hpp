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

// Deterministic, splittable random streams.
//
// Every stream is a PCG-XSH-RR 64/32 generator seeded the way the PCG
// reference implementation does it (`pcg32_srandom_r(initstate, initseq)`),
// with the root seed as `initstate` and the stream label as `initseq`.
// All conversions from raw bits to reals and bounded integers are pinned so
// that independent ports produce identical datasets.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace cogscale {

class InvalidRange : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Root seed of a dataset, reservoir or sweep.
struct Seed {
  std::uint64_t value = 0;

  friend constexpr bool operator==(Seed, Seed) = default;
};

/// PCG-XSH-RR with 64-bit state and 32-bit output.
class Pcg32 {
 public:
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;

  constexpr Pcg32(std::uint64_t initstate, std::uint64_t initseq) noexcept
      : state_(0), inc_((initseq << 1u) | 1u) {
    next();
    state_ += initstate;
    next();
  }

  constexpr std::uint32_t next() noexcept {
    const std::uint64_t old = state_;
    state_ = old * kMultiplier + inc_;
    const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
  }

  constexpr std::uint64_t state() const noexcept { return state_; }
  constexpr std::uint64_t increment() const noexcept { return inc_; }

  friend constexpr bool operator==(const Pcg32&, const Pcg32&) = default;

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
};

/// One independent random stream. Copying a stream snapshots its state, so a
/// copy replays exactly the draws the original will produce next.
class RngStream {
 public:
  constexpr RngStream(Seed root, std::uint64_t stream_id) noexcept
      : engine_(root.value, stream_id), stream_id_(stream_id) {}

  constexpr std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Next 64-bit draw: two consecutive 32-bit outputs, high word first.
  constexpr std::uint64_t next_u64() noexcept {
    const std::uint64_t hi = engine_.next();
    const std::uint64_t lo = engine_.next();
    return (hi << 32u) | lo;
  }

  constexpr std::uint32_t next_u32() noexcept { return engine_.next(); }

  friend constexpr bool operator==(const RngStream&, const RngStream&) = default;

 private:
  Pcg32 engine_;
  std::uint64_t stream_id_;
};

/// PCG keeps 63 bits of the increment, so labels differing only in bit 63
/// select the same sequence; callers keep labels below 2^63.
inline constexpr RngStream derive_stream(Seed root, std::uint64_t stream_id) noexcept {
  return RngStream(root, stream_id);
}

/// Uniform real in [lo, hi) from the top 53 bits of the next 64-bit draw.
inline double draw_uniform(RngStream& s, double lo, double hi) {
  if (!(lo < hi)) {
    throw InvalidRange("draw_uniform: need lo < hi, got [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + ")");
  }
  const double unit = static_cast<double>(s.next_u64() >> 11u) * 0x1.0p-53;
  const double v = lo + (hi - lo) * unit;
  // Rounding in the affine map can land on hi for some (lo, hi).
  return v < hi ? v : std::nextafter(hi, lo);
}

/// Unbiased integer in [0, n) using Lemire's multiply-and-reject method.
inline std::uint64_t draw_index(RngStream& s, std::uint64_t n) {
  if (n == 0) throw InvalidRange("draw_index: n must be >= 1");
  unsigned __int128 m = static_cast<unsigned __int128>(s.next_u64()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(s.next_u64()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64u);
}

/// SplitMix64 finalizer; a bijection on 64-bit words.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30u)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27u)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31u);
}

/// Stream label for sample `index` of split `split` of task `task`.
/// The label is a 63-bit mix of the packed triple (index < 2^48).
inline constexpr std::uint64_t sample_stream_id(std::uint32_t task, std::uint32_t split,
                                                std::uint64_t index) noexcept {
  const std::uint64_t packed = (static_cast<std::uint64_t>((task + 1u) & 0xffu) << 56u) |
                               (static_cast<std::uint64_t>((split + 1u) & 0xffu) << 48u) |
                               (index & 0xffffffffffffULL);
  return mix64(packed) >> 1u;
}

}  // namespace cogscale
