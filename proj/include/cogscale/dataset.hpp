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

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cogscale/config.hpp"
#include "cogscale/core.hpp"
#include "cogscale/rng.hpp"

namespace cogscale {

/// A named block of columns in the input or output encoding.
struct Channel {
  std::string name;
  std::size_t offset = 0;
  std::size_t width = 0;
  std::string doc;

  friend bool operator==(const Channel&, const Channel&) = default;
};

struct ChannelLayout {
  std::vector<Channel> input;
  std::vector<Channel> output;

  static std::size_t total_width(const std::vector<Channel>& channels) {
    std::size_t w = 0;
    for (const auto& c : channels) w += c.width;
    return w;
  }

  friend bool operator==(const ChannelLayout&, const ChannelLayout&) = default;
};

struct Dataset {
  TaskConfig config;
  Seed seed;
  std::size_t d_in = 0;
  std::size_t d_out = 0;
  std::optional<SlotLayout> slot_layout;
  ChannelLayout channels;
  std::vector<Sample> train;
  std::vector<Sample> valid;
  std::vector<Sample> test;

  TaskId task() const { return task_of(config); }
  MetricKind metric() const { return task_metric(task()); }

  const std::vector<Sample>& split(Split s) const {
    switch (s) {
      case Split::kTrain: return train;
      case Split::kValid: return valid;
      case Split::kTest: return test;
    }
    return test;
  }
  std::vector<Sample>& split(Split s) {
    return const_cast<std::vector<Sample>&>(std::as_const(*this).split(s));
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

}  // namespace cogscale
