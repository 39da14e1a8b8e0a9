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


#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "cogscale/dataset_io.hpp"
#include "cogscale/harness.hpp"

namespace cs = cogscale;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

/// Runs the CLI with `args`, capturing stdout; stderr is discarded.
Run cli(const std::string& args) {
  const std::string cmd = std::string(COGSCALE_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("cogscale_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Cli, GenerateIsReproducible) {
  const auto dir = scratch("gen");
  const auto a = cli("generate --task adding_problem --difficulty small --seed 3 --out " + (dir / "a.cgsd").string());
  const auto b = cli("generate --task adding_problem --difficulty small --seed 3 --out " + (dir / "b.cgsd").string());
  ASSERT_EQ(a.status, 0);
  ASSERT_EQ(b.status, 0);
  EXPECT_EQ(a.out.substr(0, 64), b.out.substr(0, 64));
  const auto d = cs::read_dataset(dir / "a.cgsd");
  EXPECT_EQ(d, cs::generate(cs::TaskId::kAddingProblem, cs::Difficulty::kSmall, cs::Seed{3}));
  EXPECT_EQ(a.out.substr(0, 64), cs::sha256_hex(cs::serialize_dataset(d)));

  const auto c = cli("generate --task adding_problem --difficulty small --seed 4 --out " + (dir / "c.cgsd").string());
  EXPECT_NE(a.out.substr(0, 64), c.out.substr(0, 64));
}

TEST(Cli, GenerateFromConfigFile) {
  const auto dir = scratch("cfg");
  cs::write_text(dir / "c.json", R"({"task": "simple_copy", "n_train": 4, "n_valid": 2, "n_test": 2})");
  const auto r = cli("generate --config " + (dir / "c.json").string() + " --out " + (dir / "d.cgsd").string());
  ASSERT_EQ(r.status, 0);
  const auto d = cs::read_dataset(dir / "d.cgsd");
  EXPECT_EQ(d.train.size(), 4u);
  EXPECT_EQ(d.task(), cs::TaskId::kSimpleCopy);
}

TEST(Cli, UsageErrorsExitTwo) {
  const auto dir = scratch("usage");
  EXPECT_EQ(cli("generate --task juggling").status, 2);
  EXPECT_EQ(cli("generate --task adding_problem --frobnicate").status, 2);
  EXPECT_EQ(cli("").status, 2);
  EXPECT_EQ(cli("generate").status, 2);
  cs::write_text(dir / "bad.json", R"({"task": "simple_copy", "delay": -1})");
  EXPECT_EQ(cli("generate --config " + (dir / "bad.json").string()).status, 2);
  cs::write_text(dir / "m.json", R"({"version": 9})");
  EXPECT_EQ(cli("esn-sweep --manifest " + (dir / "m.json").string()).status, 2);
  EXPECT_EQ(cli("--help").status, 0);
  EXPECT_EQ(cli("generate --help").status, 0);
}

TEST(Cli, BudgetTable) {
  const auto r = cli("budget-table --task discrete_postcasting --difficulty small --budget 10000");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["entries"].size(), 1u);
  EXPECT_EQ(j["entries"][0]["width"], 3332);
}

TEST(Cli, SweepAggregateRadar) {
  const auto dir = scratch("sweep");
  cs::RunManifest m;
  m.tasks = {"discrete_postcasting"};
  m.difficulties = {"small"};
  m.budgets = {30};
  m.seeds = {0};
  m.grid.leaking_rates = {1.0};
  m.grid.spectral_radii = {0.9};
  m.grid.input_scalings = {1.0};
  m.grid.ridges = {1e-6};
  m.out_dir = (dir / "out").string();
  cs::write_text(dir / "m.json", nlohmann::json(m).dump());

  const auto s = cli("esn-sweep --manifest " + (dir / "m.json").string());
  ASSERT_EQ(s.status, 0);
  EXPECT_EQ(s.out.rfind("task,difficulty,budget,best_overall,mean,std,model\n", 0), 0u);
  const auto reports = (dir / "out" / "reports.jsonl").string();
  EXPECT_EQ(cs::read_reports(reports).size(), 1u);

  const auto a = cli("aggregate --reports " + reports);
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, s.out);

  const auto r = cli("radar --reports " + reports + " --task discrete_postcasting --task adding_problem");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["axes"].size(), 2u);
  EXPECT_TRUE(j["models"]["esn"].contains("discrete_postcasting"));
  EXPECT_FALSE(j["models"]["esn"].contains("adding_problem"));

  EXPECT_EQ(cli("aggregate --reports " + (dir / "none.jsonl").string()).status, 1);
}
