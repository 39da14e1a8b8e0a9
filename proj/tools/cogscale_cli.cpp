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

// cogscale: dataset generation, ESN sweeps, aggregation and radar data.
//
// Exit codes: 0 success, 1 run failure, 2 usage error (bad flags, unknown
// task, invalid config or manifest).

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cogscale/cogscale.hpp"

namespace {

namespace cs = cogscale;

constexpr int kOk = 0;
constexpr int kRunFailure = 1;
constexpr int kUsage = 2;

std::vector<std::string> task_names() {
  std::vector<std::string> out;
  for (auto t : cs::all_tasks()) out.emplace_back(cs::task_name(t));
  return out;
}

const std::vector<std::string> kDifficultyNames = {"small", "medium", "SM", "MD", "sm", "md"};

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw cs::IoError("cannot open " + path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw cs::ConfigError(path + ": " + e.what());
  }
}

void print_violations(const cs::ConfigError& e) {
  std::cerr << e.what() << "\n";
}

struct GenerateArgs {
  std::string task;
  std::string difficulty = "small";
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  cs::TaskConfig config;
  std::string label;
  if (!a.config.empty()) {
    auto j = read_json_file(a.config);
    if (!a.task.empty()) {
      if (j.contains("task") && j["task"] != a.task) {
        std::cerr << "--task " << a.task << " disagrees with the config file task " << j["task"] << "\n";
        return kUsage;
      }
      j["task"] = a.task;
    }
    config = cs::config_from_json(j);
    label = "custom";
  } else {
    if (a.task.empty()) {
      std::cerr << "generate needs --task or --config\n";
      return kUsage;
    }
    const auto diff = cs::difficulty_from_name(a.difficulty);
    config = cs::preset(cs::task_from_name(a.task), diff);
    label = std::string(cs::difficulty_name(diff));
  }
  if (auto v = cs::validate(config); !v.empty()) {
    print_violations(cs::ConfigError(v));
    return kUsage;
  }
  const auto task = std::string(cs::task_name(cs::task_of(config)));
  const std::string out =
      a.out.empty() ? task + "_" + label + "_" + std::to_string(a.seed) + ".cgsd" : a.out;
  const auto d = cs::generate(config, cs::Seed{a.seed});
  const std::string bytes = cs::serialize_dataset(d);
  if (auto parent = std::filesystem::path(out).parent_path(); !parent.empty()) {
    std::filesystem::create_directories(parent);
  }
  std::ofstream os(out, std::ios::binary | std::ios::trunc);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) {
    std::cerr << "cannot write " << out << "\n";
    return kRunFailure;
  }
  std::cout << cs::sha256_hex(bytes) << "  " << out << "\n";
  std::cerr << task << ": " << d.train.size() << "/" << d.valid.size() << "/" << d.test.size()
            << " samples, d_in=" << d.d_in << ", d_out=" << d.d_out << ", " << bytes.size()
            << " bytes\n";
  return kOk;
}

struct SweepArgs {
  std::string manifest;
  std::vector<std::string> tasks;
  std::vector<std::string> difficulties;
  std::vector<std::int64_t> budgets;
  std::vector<std::uint64_t> seeds;
  std::string out;
};

cs::RunManifest resolve_manifest(const SweepArgs& a) {
  cs::RunManifest m;
  if (!a.manifest.empty()) m = cs::load_manifest(a.manifest);
  if (!a.tasks.empty()) m.tasks = a.tasks;
  if (!a.difficulties.empty()) m.difficulties = a.difficulties;
  if (!a.budgets.empty()) m.budgets = a.budgets;
  if (!a.seeds.empty()) m.seeds = a.seeds;
  if (!a.out.empty()) m.out_dir = a.out;
  if (auto v = cs::validate(m); !v.empty()) throw cs::ConfigError(v);
  return m;
}

int cmd_esn_sweep(const SweepArgs& a) {
  const auto m = resolve_manifest(a);
  const auto outcome = cs::run_esn_sweep(m, cs::default_threads(), &std::cerr);
  std::cerr << "computed " << outcome.computed << ", reused " << outcome.reused << ", failed "
            << outcome.failed << "; results in " << m.out_dir << "\n";
  std::cout << cs::summary_csv(outcome.summary);
  return outcome.failed > 0 ? kRunFailure : kOk;
}

int cmd_budget_table(const SweepArgs& a) {
  const auto m = resolve_manifest(a);
  const auto text = cs::widths_json(cs::esn_widths(m)).dump(2) + "\n";
  if (a.out.empty()) std::cout << text;
  else cs::write_text(a.out, text);
  return kOk;
}

std::vector<cs::EvalReport> read_all(const std::vector<std::string>& paths) {
  std::vector<cs::EvalReport> out;
  for (const auto& p : paths) {
    if (!std::filesystem::exists(p)) throw cs::IoError("no such report file: " + p);
    auto r = cs::read_reports(p);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

int cmd_aggregate(const std::vector<std::string>& reports, const std::string& out) {
  std::vector<cs::EvalReport> usable;
  for (auto& r : read_all(reports)) {
    if (r.ok()) usable.push_back(std::move(r));
  }
  if (usable.empty()) {
    std::cerr << "no successful runs in the given report files\n";
    return kRunFailure;
  }
  const auto csv = cs::summary_csv(cs::aggregate(usable));
  if (out.empty()) std::cout << csv;
  else cs::write_text(out, csv);
  return kOk;
}

int cmd_radar(const std::vector<std::string>& reports, std::vector<std::string> tasks,
              const std::string& out) {
  if (tasks.empty()) tasks = task_names();
  const auto data = cs::radar(read_all(reports), tasks);
  for (const auto& m : data.missing) std::cerr << "missing: " << m << "\n";
  const auto text = cs::radar_json(data).dump(2) + "\n";
  if (out.empty()) std::cout << text;
  else cs::write_text(out, text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CogScale task generator and ESN baseline"};
  app.require_subcommand(1);
  const auto tasks = task_names();

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write one dataset to a .cgsd file");
  g->add_option("--task", gen.task, "Task name")->check(CLI::IsMember(tasks));
  g->add_option("--difficulty", gen.difficulty, "small or medium")->check(CLI::IsMember(kDifficultyNames));
  g->add_option("--config", gen.config, "JSON task config (overrides --difficulty)");
  g->add_option("--seed", gen.seed, "Dataset seed");
  g->add_option("--out", gen.out, "Output path");

  SweepArgs sweep;
  auto* s = app.add_subcommand("esn-sweep", "Run the ESN grid sweep described by a manifest");
  s->add_option("--manifest", sweep.manifest, "Run manifest (JSON)");
  s->add_option("--task", sweep.tasks, "Restrict to these tasks")->check(CLI::IsMember(tasks));
  s->add_option("--difficulty", sweep.difficulties, "Restrict to these difficulties")
      ->check(CLI::IsMember(kDifficultyNames));
  s->add_option("--budget", sweep.budgets, "Parameter budgets");
  s->add_option("--seed", sweep.seeds, "Reservoir seeds");
  s->add_option("--out", sweep.out, "Output directory");

  SweepArgs widths;
  auto* b = app.add_subcommand("budget-table", "Write the model-width sidecar for a manifest");
  b->add_option("--manifest", widths.manifest, "Run manifest (JSON)");
  b->add_option("--task", widths.tasks, "Restrict to these tasks")->check(CLI::IsMember(tasks));
  b->add_option("--difficulty", widths.difficulties, "Difficulties")->check(CLI::IsMember(kDifficultyNames));
  b->add_option("--budget", widths.budgets, "Parameter budgets");
  b->add_option("--out", widths.out, "Output file (default stdout)");

  std::vector<std::string> agg_reports;
  std::string agg_out;
  auto* ag = app.add_subcommand("aggregate", "Summarize report files into a CSV table");
  ag->add_option("--reports", agg_reports, "reports.jsonl files")->required();
  ag->add_option("--out", agg_out, "Output CSV (default stdout)");

  std::vector<std::string> radar_reports;
  std::vector<std::string> radar_tasks;
  std::string radar_out;
  auto* rd = app.add_subcommand("radar", "Per-model accuracy per task, for plotting");
  rd->add_option("--reports", radar_reports, "reports.jsonl files")->required();
  rd->add_option("--task", radar_tasks, "Axes to include (default all)")->check(CLI::IsMember(tasks));
  rd->add_option("--out", radar_out, "Output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (g->parsed()) return cmd_generate(gen);
    if (s->parsed()) return cmd_esn_sweep(sweep);
    if (b->parsed()) return cmd_budget_table(widths);
    if (ag->parsed()) return cmd_aggregate(agg_reports, agg_out);
    if (rd->parsed()) return cmd_radar(radar_reports, radar_tasks, radar_out);
  } catch (const cs::ConfigError& e) {
    print_violations(e);
    return kUsage;
  } catch (const cs::LookupError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRunFailure;
  }
  return kUsage;
}
