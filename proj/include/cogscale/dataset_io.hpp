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

// .cgsd dataset files. Layout (all integers and floats little-endian):
//
//   "CGSD" | u32 version | u32 header_len | header JSON (header_len bytes)
//   for split in train, valid, test:
//     for sample in split:
//       input  T x d_in  f32, row-major
//       target T x d_out f32, row-major
//       eval_mask, T bits packed LSB-first, zero-padded to a whole byte
//
// The header JSON carries task, config, seed, metric, d_in, d_out,
// slot_layout, channels and, per split, the sample count and step count T
// (an integer, or an array when samples in a split differ in length).
// docs/cgsd-format.md describes the fields in full.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cogscale/config.hpp"
#include "cogscale/core.hpp"
#include "cogscale/dataset.hpp"

namespace cogscale {

inline constexpr char kCgsdMagic[4] = {'C', 'G', 'S', 'D'};
inline constexpr std::uint32_t kCgsdVersion = 1;

class FormatError : public std::runtime_error {
 public:
  FormatError(std::uint64_t offset, const std::string& what)
      : std::runtime_error("cgsd format error at byte " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <class T>
T to_le(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

class CountingWriter {
 public:
  explicit CountingWriter(std::ostream& os) : os_(os) {}

  void bytes(const void* p, std::size_t n) {
    os_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!os_) throw IoError("cgsd write failed after " + std::to_string(count_) + " bytes");
    count_ += n;
  }
  void u32(std::uint32_t v) {
    v = to_le(v);
    bytes(&v, 4);
  }
  void floats(const Matrix& m) {
    if constexpr (std::endian::native == std::endian::little) {
      bytes(m.data(), static_cast<std::size_t>(m.size()) * sizeof(float));
    } else {
      for (Eigen::Index i = 0; i < m.size(); ++i) {
        const float v = to_le(m.data()[i]);
        bytes(&v, 4);
      }
    }
  }
  std::uint64_t count() const noexcept { return count_; }

 private:
  std::ostream& os_;
  std::uint64_t count_ = 0;
};

class CountingReader {
 public:
  explicit CountingReader(std::istream& is) : is_(is) {}

  /// Reads exactly n bytes or throws FormatError naming `what`.
  void bytes(void* p, std::size_t n, const std::string& what) {
    is_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    const auto got = static_cast<std::uint64_t>(is_.gcount());
    if (got != n) throw FormatError(offset_ + got, "truncated while reading " + what);
    offset_ += n;
  }
  std::uint32_t u32(const std::string& what) {
    std::uint32_t v = 0;
    bytes(&v, 4, what);
    return to_le(v);
  }
  void floats(Matrix& m, const std::string& what) {
    bytes(m.data(), static_cast<std::size_t>(m.size()) * sizeof(float), what);
    if constexpr (std::endian::native == std::endian::big) {
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = to_le(m.data()[i]);
    }
  }
  std::uint64_t offset() const noexcept { return offset_; }
  bool at_end() { return is_.peek() == std::char_traits<char>::eof(); }

 private:
  std::istream& is_;
  std::uint64_t offset_ = 0;
};

inline nlohmann::json channels_to_json(const std::vector<Channel>& cs) {
  auto out = nlohmann::json::array();
  for (const auto& c : cs) {
    out.push_back({{"name", c.name}, {"offset", c.offset}, {"width", c.width}, {"doc", c.doc}});
  }
  return out;
}

inline std::vector<Channel> channels_from_json(const nlohmann::json& j) {
  std::vector<Channel> out;
  for (const auto& c : j) {
    out.push_back({c.at("name").get<std::string>(), c.at("offset").get<std::size_t>(),
                   c.at("width").get<std::size_t>(), c.value("doc", std::string{})});
  }
  return out;
}

}  // namespace detail

inline std::size_t mask_bytes(std::size_t steps) { return (steps + 7) / 8; }

inline nlohmann::json cgsd_header(const Dataset& d) {
  nlohmann::json h;
  h["task"] = std::string(task_name(d.task()));
  h["config"] = config_to_json(d.config);
  h["seed"] = d.seed.value;
  h["metric"] = std::string(metric_name(d.metric()));
  h["d_in"] = d.d_in;
  h["d_out"] = d.d_out;
  if (d.slot_layout) {
    auto groups = nlohmann::json::array();
    for (const auto& g : *d.slot_layout) groups.push_back({g.offset, g.width});
    h["slot_layout"] = groups;
  } else {
    h["slot_layout"] = nullptr;
  }
  h["channels"] = {{"input", detail::channels_to_json(d.channels.input)},
                   {"output", detail::channels_to_json(d.channels.output)}};
  nlohmann::json splits;
  for (auto s : kAllSplits) {
    const auto& samples = d.split(s);
    nlohmann::json steps = nlohmann::json::array();
    bool uniform = true;
    for (const auto& smp : samples) {
      steps.push_back(smp.steps());
      uniform = uniform && smp.steps() == samples.front().steps();
    }
    nlohmann::json entry = {{"count", samples.size()}};
    entry["T"] = (uniform && !samples.empty()) ? nlohmann::json(samples.front().steps()) : steps;
    splits[std::string(split_name(s))] = entry;
  }
  h["splits"] = splits;
  return h;
}

/// Writes `d` to `os`; returns the number of bytes written.
inline std::uint64_t write_dataset(const Dataset& d, std::ostream& os) {
  for (auto s : kAllSplits) {
    for (const auto& smp : d.split(s)) {
      if (static_cast<std::size_t>(smp.input.cols()) != d.d_in ||
          static_cast<std::size_t>(smp.target.cols()) != d.d_out ||
          smp.eval_mask.size() != smp.steps() ||
          static_cast<std::size_t>(smp.target.rows()) != smp.steps()) {
        throw IoError("write_dataset: sample shapes disagree with the dataset header");
      }
    }
  }
  const std::string header = cgsd_header(d).dump();
  detail::CountingWriter w(os);
  w.bytes(kCgsdMagic, 4);
  w.u32(kCgsdVersion);
  w.u32(static_cast<std::uint32_t>(header.size()));
  w.bytes(header.data(), header.size());
  std::vector<std::uint8_t> packed;
  for (auto s : kAllSplits) {
    for (const auto& smp : d.split(s)) {
      w.floats(smp.input);
      w.floats(smp.target);
      packed.assign(mask_bytes(smp.steps()), 0);
      for (std::size_t t = 0; t < smp.steps(); ++t) {
        if (smp.eval_mask[t]) packed[t / 8] |= static_cast<std::uint8_t>(1u << (t % 8));
      }
      w.bytes(packed.data(), packed.size());
    }
  }
  os.flush();
  return w.count();
}

inline std::uint64_t write_dataset(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return write_dataset(d, os);
}

inline std::string serialize_dataset(const Dataset& d) {
  std::ostringstream os(std::ios::binary);
  write_dataset(d, os);
  return std::move(os).str();
}

inline Dataset read_dataset(std::istream& is) {
  detail::CountingReader r(is);
  char magic[4];
  r.bytes(magic, 4, "magic");
  if (std::memcmp(magic, kCgsdMagic, 4) != 0) throw FormatError(0, "bad magic, not a CGSD file");
  const auto version = r.u32("version");
  if (version != kCgsdVersion) {
    throw FormatError(4, "unsupported version " + std::to_string(version));
  }
  const auto header_len = r.u32("header length");
  const std::uint64_t header_at = r.offset();
  std::string text(header_len, '\0');
  r.bytes(text.data(), header_len, "header");

  Dataset d;
  std::vector<std::vector<std::size_t>> steps(3);
  try {
    const auto h = nlohmann::json::parse(text);
    d.config = config_from_json(h.at("config"));
    if (h.at("task").get<std::string>() != task_name(task_of(d.config))) {
      throw FormatError(header_at, "header task does not match its config");
    }
    d.seed = Seed{h.at("seed").get<std::uint64_t>()};
    d.d_in = h.at("d_in").get<std::size_t>();
    d.d_out = h.at("d_out").get<std::size_t>();
    if (!h.at("slot_layout").is_null()) {
      SlotLayout layout;
      for (const auto& g : h["slot_layout"]) {
        layout.push_back({g.at(0).get<std::size_t>(), g.at(1).get<std::size_t>()});
      }
      d.slot_layout = std::move(layout);
    }
    d.channels.input = detail::channels_from_json(h.at("channels").at("input"));
    d.channels.output = detail::channels_from_json(h.at("channels").at("output"));
    for (std::size_t s = 0; s < 3; ++s) {
      const auto& e = h.at("splits").at(std::string(split_name(kAllSplits[s])));
      const auto count = e.at("count").get<std::size_t>();
      const auto& t = e.at("T");
      if (t.is_array()) {
        steps[s] = t.get<std::vector<std::size_t>>();
        if (steps[s].size() != count) throw FormatError(header_at, "T array length differs from count");
      } else {
        steps[s].assign(count, t.get<std::size_t>());
      }
    }
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(header_at, std::string("bad header: ") + e.what());
  }

  std::vector<std::uint8_t> packed;
  for (std::size_t s = 0; s < 3; ++s) {
    auto& out = d.split(kAllSplits[s]);
    out.resize(steps[s].size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto t = static_cast<Eigen::Index>(steps[s][i]);
      const std::string where =
          std::string(split_name(kAllSplits[s])) + " sample " + std::to_string(i);
      Sample& smp = out[i];
      smp.input.resize(t, static_cast<Eigen::Index>(d.d_in));
      smp.target.resize(t, static_cast<Eigen::Index>(d.d_out));
      r.floats(smp.input, where + " input");
      r.floats(smp.target, where + " target");
      packed.resize(mask_bytes(steps[s][i]));
      r.bytes(packed.data(), packed.size(), where + " eval_mask");
      smp.eval_mask.resize(steps[s][i]);
      for (std::size_t k = 0; k < steps[s][i]; ++k) {
        smp.eval_mask[k] = (packed[k / 8] >> (k % 8)) & 1u;
      }
      smp.slot_layout = d.slot_layout;
    }
  }
  if (!r.at_end()) throw FormatError(r.offset(), "trailing bytes after the last sample");
  return d;
}

inline Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return read_dataset(is);
}

inline Dataset deserialize_dataset(const std::string& bytes) {
  std::istringstream is(bytes, std::ios::binary);
  return read_dataset(is);
}

}  // namespace cogscale
