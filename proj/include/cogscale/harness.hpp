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

// Experiment orchestration: run manifests, resumable ESN sweeps, report
// files, the summary table, radar data and the width sidecar.
//
// Output directory layout:
//   reports.jsonl   one EvalReport per line, canonically sorted
//   summary.csv     aggregate rows
//   widths.json     model width per (task, difficulty, budget)
//   datasets.json   content hash of every generated dataset

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cogscale/budget.hpp"
#include "cogscale/config.hpp"
#include "cogscale/core.hpp"
#include "cogscale/dataset_io.hpp"
#include "cogscale/esn.hpp"
#include "cogscale/hash.hpp"
#include "cogscale/metrics.hpp"
#include "cogscale/taskgen.hpp"

namespace cogscale {

inline constexpr int kManifestVersion = 1;

struct RunManifest {
  int version = kManifestVersion;
  std::string experiment = "esn";
  std::vector<std::string> tasks;  // empty means all fourteen
  std::vector<std::string> difficulties{"small", "medium"};
  std::vector<std::int64_t> budgets{1000, 10000};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::uint64_t dataset_seed = 0;
  EsnGrid grid;
  double density = 0.1;
  double bias_scaling = 0.1;
  std::int64_t max_in_degree = 100;
  std::string out_dir = "runs/esn";
};

inline std::vector<std::string> manifest_tasks(const RunManifest& m) {
  if (!m.tasks.empty()) return m.tasks;
  std::vector<std::string> out;
  for (auto t : all_tasks()) out.emplace_back(task_name(t));
  return out;
}

inline std::vector<std::string> validate(const RunManifest& m) {
  std::vector<std::string> v;
  if (m.version != kManifestVersion) {
    v.push_back("unsupported manifest version " + std::to_string(m.version));
  }
  for (const auto& t : m.tasks) {
    try {
      task_from_name(t);
    } catch (const LookupError&) {
      v.push_back("unknown task: " + t);
    }
  }
  if (m.difficulties.empty()) v.push_back("no difficulties");
  for (const auto& d : m.difficulties) {
    try {
      difficulty_from_name(d);
    } catch (const LookupError&) {
      v.push_back("unknown difficulty: " + d);
    }
  }
  if (m.budgets.empty()) v.push_back("no budgets");
  for (auto b : m.budgets) {
    if (b < 1) v.push_back("budget must be positive: " + std::to_string(b));
  }
  if (m.seeds.empty()) v.push_back("no seeds");
  if (std::set<std::uint64_t>(m.seeds.begin(), m.seeds.end()).size() != m.seeds.size()) {
    v.push_back("seeds must be distinct");
  }
  auto nonempty = [&](const std::vector<double>& g, const char* name) {
    if (g.empty()) v.push_back(std::string("grid.") + name + " is empty");
  };
  nonempty(m.grid.leaking_rates, "leaking_rates");
  nonempty(m.grid.spectral_radii, "spectral_radii");
  nonempty(m.grid.input_scalings, "input_scalings");
  nonempty(m.grid.ridges, "ridges");
  for (double a : m.grid.leaking_rates) {
    if (!(a > 0.0 && a <= 1.0)) v.push_back("leaking rate outside (0, 1]: " + std::to_string(a));
  }
  for (double r : m.grid.spectral_radii) {
    if (!(r > 0.0)) v.push_back("spectral radius must be positive: " + std::to_string(r));
  }
  for (double s : m.grid.input_scalings) {
    if (!(s > 0.0)) v.push_back("input scaling must be positive: " + std::to_string(s));
  }
  for (double l : m.grid.ridges) {
    if (!(l >= 0.0)) v.push_back("ridge must be non-negative: " + std::to_string(l));
  }
  if (!(m.density > 0.0 && m.density <= 1.0)) v.push_back("density must lie in (0, 1]");
  if (!(m.bias_scaling >= 0.0)) v.push_back("bias_scaling must be non-negative");
  if (m.max_in_degree < 0) v.push_back("max_in_degree must be non-negative");
  return v;
}

inline void to_json(nlohmann::json& j, const RunManifest& m) {
  j = {{"version", m.version},
       {"experiment", m.experiment},
       {"tasks", m.tasks},
       {"difficulties", m.difficulties},
       {"budgets", m.budgets},
       {"seeds", m.seeds},
       {"dataset_seed", m.dataset_seed},
       {"grid", m.grid},
       {"esn", {{"density", m.density}, {"bias_scaling", m.bias_scaling}, {"max_in_degree", m.max_in_degree}}},
       {"out_dir", m.out_dir}};
}

/// Missing keys keep their defaults; `version` is required.
inline void from_json(const nlohmann::json& j, RunManifest& m) {
  if (!j.is_object()) throw ConfigError("manifest must be a JSON object");
  if (!j.contains("version")) throw ConfigError("manifest has no version field");
  try {
    m.version = j.at("version").get<int>();
    m.experiment = j.value("experiment", m.experiment);
    m.tasks = j.value("tasks", m.tasks);
    m.difficulties = j.value("difficulties", m.difficulties);
    m.budgets = j.value("budgets", m.budgets);
    m.seeds = j.value("seeds", m.seeds);
    m.dataset_seed = j.value("dataset_seed", m.dataset_seed);
    if (j.contains("grid")) m.grid = j["grid"].get<EsnGrid>();
    if (j.contains("esn")) {
      const auto& e = j["esn"];
      m.density = e.value("density", m.density);
      m.bias_scaling = e.value("bias_scaling", m.bias_scaling);
      m.max_in_degree = e.value("max_in_degree", m.max_in_degree);
    }
    m.out_dir = j.value("out_dir", m.out_dir);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
}

inline RunManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open manifest " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest " + path.string() + ": " + e.what());
  }
  auto m = j.get<RunManifest>();
  if (auto v = validate(m); !v.empty()) throw ConfigError(v);
  return m;
}

// --- report files -------------------------------------------------------------------

/// Canonical order: task, difficulty, model, budget, config, seed.
inline void sort_reports(std::vector<EvalReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const EvalReport& a, const EvalReport& b) {
    return std::tie(a.task, a.difficulty, a.model, a.budget) <
               std::tie(b.task, b.difficulty, b.model, b.budget) ||
           (std::tie(a.task, a.difficulty, a.model, a.budget) ==
                std::tie(b.task, b.difficulty, b.model, b.budget) &&
            std::make_pair(a.config_key(), a.seed) < std::make_pair(b.config_key(), b.seed));
  });
}

/// Reads a JSONL report file. A missing file yields no reports. A torn last
/// line (from an interrupted run) is dropped; corruption elsewhere throws.
inline std::vector<EvalReport> read_reports(const std::filesystem::path& path) {
  std::vector<EvalReport> out;
  std::ifstream is(path);
  if (!is) return out;
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(is, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      out.push_back(nlohmann::json::parse(lines[i]).get<EvalReport>());
    } catch (const nlohmann::json::exception& e) {
      if (i + 1 == lines.size()) break;
      throw IoError(path.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

inline void write_reports(const std::filesystem::path& path, std::vector<EvalReport> reports) {
  sort_reports(reports);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os) throw IoError("cannot write " + tmp);
    for (const auto& r : reports) os << nlohmann::json(r).dump() << '\n';
    if (!os) throw IoError("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string summary_csv(const std::vector<AggregateRow>& rows) {
  std::ostringstream os;
  os << "task,difficulty,budget,best_overall,mean,std,model\n";
  for (const auto& r : rows) {
    os << r.key.task << ',' << r.key.difficulty << ',' << r.key.budget << ','
       << format_number(r.best_overall) << ',' << format_number(r.mean) << ','
       << format_number(r.std) << ',' << r.key.model << '\n';
  }
  return os.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  os << text;
  if (!os) throw IoError("write failed: " + path.string());
}

// --- radar ---------------------------------------------------------------------------

struct RadarData {
  std::vector<std::string> axes;
  std::map<std::string, std::map<std::string, double>> accuracy;  // model -> task -> value
  std::vector<std::string> missing;  // "model/task" pairs without reports
};

/// Accuracy per model and task: 1 - best overall score, where best overall is
/// the minimum test score over every successful run (all difficulties,
/// budgets, configs and seeds present). MSE tasks are clipped to [0, 1].
inline RadarData radar(const std::vector<EvalReport>& reports,
                       const std::vector<std::string>& tasks) {
  RadarData out;
  out.axes = tasks;
  std::map<std::string, std::map<std::string, double>> best;
  std::set<std::string> models;
  for (const auto& r : reports) {
    models.insert(r.model);
    if (!r.ok()) continue;
    auto [it, fresh] = best[r.model].emplace(r.task, r.test->score);
    if (!fresh) it->second = std::min(it->second, r.test->score);
  }
  for (const auto& model : models) {
    for (const auto& t : tasks) {
      const auto& per = best[model];
      const auto it = per.find(t);
      if (it == per.end()) {
        out.missing.push_back(model + "/" + t);
        continue;
      }
      out.accuracy[model][t] = std::clamp(1.0 - it->second, 0.0, 1.0);
    }
  }
  return out;
}

inline nlohmann::json radar_json(const RadarData& r) {
  nlohmann::json models = nlohmann::json::object();
  for (const auto& [model, per] : r.accuracy) {
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [task, acc] : per) m[task] = acc;
    models[model] = m;
  }
  return {{"axes", r.axes}, {"models", models}};
}

// --- widths sidecar ----------------------------------------------------------------------

struct WidthEntry {
  std::string task;
  std::string difficulty;
  std::int64_t budget = 0;
  std::string model;
  std::int64_t d_in = 0;
  std::int64_t d_out = 0;
  std::int64_t width = 0;
  std::int64_t param_count = 0;
};

inline nlohmann::json widths_json(const std::vector<WidthEntry>& entries) {
  auto arr = nlohmann::json::array();
  for (const auto& e : entries) {
    arr.push_back({{"task", e.task},
                   {"difficulty", e.difficulty},
                   {"budget", e.budget},
                   {"model", e.model},
                   {"d_in", e.d_in},
                   {"d_out", e.d_out},
                   {"width", e.width},
                   {"param_count", e.param_count}});
  }
  return {{"version", 1}, {"entries", arr}};
}

/// ESN reservoir widths for every (task, difficulty, budget) in the
/// manifest. Only the output width matters, so datasets are not generated.
inline std::vector<WidthEntry> esn_widths(const RunManifest& m) {
  std::vector<WidthEntry> out;
  for (const auto& t : manifest_tasks(m)) {
    for (const auto& dname : m.difficulties) {
      const auto diff = difficulty_from_name(dname);
      const Dataset shape = [&] {
        // Smallest instance of the same preset carries the same channel widths.
        auto cfg = preset(task_from_name(t), diff);
        std::visit([](auto& c) {
          if constexpr (requires { c.n_train; }) {
            c.n_train = 1;
            c.n_valid = 1;
            c.n_test = 1;
          }
        }, cfg);
        return generate(cfg, Seed{m.dataset_seed}, 1);
      }();
      for (auto b : m.budgets) {
        WidthEntry e{t, std::string(difficulty_name(diff)), b, "esn",
                     static_cast<std::int64_t>(shape.d_in), static_cast<std::int64_t>(shape.d_out)};
        try {
          e.width = esn_units_for_budget(b, e.d_out);
          e.param_count = esn_param_count(e.width, e.d_out);
        } catch (const InfeasibleBudget&) {
          e.width = 0;
          e.param_count = 0;
        }
        out.push_back(e);
      }
    }
  }
  return out;
}

// --- the sweep ---------------------------------------------------------------------------

struct SweepOutcome {
  std::size_t computed = 0;  // runs evaluated in this invocation
  std::size_t reused = 0;    // runs found in an earlier reports file
  std::size_t failed = 0;    // runs with an error, old or new
  std::vector<AggregateRow> summary;
};

/// Runs every (task, difficulty, budget, seed, grid point) of the manifest,
/// resuming from `out_dir/reports.jsonl`: runs whose config hash is already
/// recorded without error are not recomputed. New reports are appended as
/// they finish, so an interrupted sweep loses at most the runs in flight.
inline SweepOutcome run_esn_sweep(const RunManifest& m, std::size_t threads = default_threads(),
                                  std::ostream* log = nullptr) {
  if (auto v = validate(m); !v.empty()) throw ConfigError(v);
  const std::filesystem::path dir = m.out_dir;
  std::filesystem::create_directories(dir);
  const auto reports_path = dir / "reports.jsonl";

  std::vector<EvalReport> reports;
  std::set<std::string> done;
  for (auto& r : read_reports(reports_path)) {
    if (!r.error.empty()) continue;  // failed runs are retried
    if (done.insert(r.config_hash).second) reports.push_back(std::move(r));
  }
  // Rewrite without failed or torn entries before appending.
  write_reports(reports_path, reports);

  SweepOutcome outcome;
  std::mutex mu;
  std::ofstream append(reports_path, std::ios::app);
  nlohmann::json datasets = nlohmann::json::object();
  std::set<std::string> wanted;

  for (const auto& t : manifest_tasks(m)) {
    const auto task = task_from_name(t);
    for (const auto& dname : m.difficulties) {
      const auto diff = difficulty_from_name(dname);
      const auto dataset = generate(preset(task, diff), Seed{m.dataset_seed}, threads);
      datasets[t + "/" + std::string(difficulty_name(diff))] = sha256_hex(serialize_dataset(dataset));
      for (auto budget : m.budgets) {
        EsnSweepOptions o;
        o.difficulty = std::string(difficulty_name(diff));
        o.budget = budget;
        o.density = m.density;
        o.bias_scaling = m.bias_scaling;
        o.max_in_degree = m.max_in_degree;
        o.seeds = m.seeds;
        o.threads = threads;
        try {
          o.n_units = esn_units_for_budget(budget, static_cast<std::int64_t>(dataset.d_out));
        } catch (const InfeasibleBudget& e) {
          if (log) *log << t << "/" << o.difficulty << "/" << budget << ": " << e.what() << "\n";
          continue;
        }
        for (const auto& p : grid_points(m.grid)) {
          for (auto s : m.seeds) wanted.insert(esn_run_hash(dataset, o, m.grid, p, s));
        }
        if (log) {
          *log << t << "/" << o.difficulty << "/" << budget << ": n_units=" << o.n_units << ", "
               << m.grid.points() * m.seeds.size() << " runs\n";
        }
        auto fresh = esn_sweep(
            dataset, m.grid, o, [&](const std::string& h) { return done.count(h) > 0; },
            [&](const EvalReport& r) {
              append << nlohmann::json(r).dump() << '\n';
              append.flush();
            });
        std::lock_guard lock(mu);
        outcome.computed += fresh.size();
        for (auto& r : fresh) reports.push_back(std::move(r));
      }
    }
  }
  append.close();

  // Keep only runs this manifest asks for, in canonical order.
  std::vector<EvalReport> kept;
  for (auto& r : reports) {
    if (wanted.count(r.config_hash)) kept.push_back(std::move(r));
  }
  outcome.reused = kept.size() - outcome.computed;
  for (const auto& r : kept) outcome.failed += r.error.empty() ? 0 : 1;
  write_reports(reports_path, kept);
  std::vector<EvalReport> usable;
  for (const auto& r : kept) {
    if (r.ok()) usable.push_back(r);
  }
  if (!usable.empty()) {
    outcome.summary = aggregate(usable);
    write_text(dir / "summary.csv", summary_csv(outcome.summary));
  }
  write_text(dir / "widths.json", widths_json(esn_widths(m)).dump(2) + "\n");
  write_text(dir / "datasets.json", datasets.dump(2) + "\n");
  return outcome;
}

}  // namespace cogscale
