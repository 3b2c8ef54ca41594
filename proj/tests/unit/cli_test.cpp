// Copyright 2026 The advbound Authors.
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

#include "commands.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"

namespace advbound::cli {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("advbound_cli_" + name);
  std::ofstream(path, std::ios::binary) << body;
  return path.string();
}

// Splits TSV output into data rows of cells, skipping the manifest comment
// and the header.
std::vector<std::vector<std::string>> tsv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(lines, line)) {
    if (line.starts_with("#")) continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, '\t')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string random_csv(std::uint64_t seed, int per_class) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::ostringstream csv;
  csv.precision(17);
  for (int i = 0; i < 2 * per_class; ++i) {
    const int y = i < per_class ? 1 : -1;
    csv << 0.8 * y + normal(rng) << ',' << normal(rng) << ',' << y << '\n';
  }
  return csv.str();
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"bound", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(run({"bound", "--input", "x.csv"}).code, kExitUsage);  // missing --eps
  EXPECT_EQ(run({"bound", "--input", "/nonexistent/x.csv", "--eps", "1"}).code, kExitUsage);
  const auto path = write_temp("pair.csv", "0,0,1\n0.5,0,-1\n");
  EXPECT_EQ(run({"sweep", "--input", path, "--eps-grid", "1:0:0.1"}).code, kExitUsage);
  EXPECT_EQ(run({"sweep", "--input", path, "--eps-grid", "0:1:0"}).code, kExitUsage);
  EXPECT_EQ(run({"bound", "--input", path, "--eps", "-1"}).code, kExitUsage);
  EXPECT_EQ(run({"bound", "--input", path, "--eps", "1", "--samples", "5"}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(CliTest, InputErrors) {
  const auto bad = write_temp("bad.csv", "0,0,1\n0,zz,-1\n");
  const auto r = run({"bound", "--input", bad, "--eps", "1"});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  const auto bin = write_temp("bad.bin", "nope");
  EXPECT_EQ(run({"bound", "--input", bin, "--eps", "1"}).code, kExitInput);
}

TEST(CliTest, ConflictingPairHitsCeiling) {
  const auto path = write_temp("pair.csv", "0,0,1\n0.5,0,-1\n");
  const auto r = run({"bound", "--input", path, "--eps", "10", "--verify", "--emit-q"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["objective_nats"].get<double>(), std::numbers::ln2, 1e-15);
  EXPECT_NEAR(j["objective_bits"].get<double>(), 1.0, 1e-15);
  EXPECT_EQ(j["zero_one_loss"].get<double>(), 0.5);
  EXPECT_EQ(j["n_edges"], 1);
  EXPECT_EQ(j["q"]["a"][0][0], 1);
  EXPECT_EQ(j["q"]["a"][0][1], 2);
  EXPECT_TRUE(j["verification"]["passed"].get<bool>());
  EXPECT_EQ(j["manifest"]["input_digest"].get<std::string>().rfind("sha256:", 0), 0u);
  EXPECT_GE(j["manifest"]["timings"]["graph_ms"].get<double>(), 0.0);
}

TEST(CliTest, ZeroBudgetInGeneralPosition) {
  const auto path = write_temp("general.csv", random_csv(3, 20));
  const auto r = run({"bound", "--input", path, "--eps", "0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["objective_nats"].get<double>(), 0.0);
}

TEST(CliTest, VerifiesRandomInstanceWithReference) {
  const auto path = write_temp("random200.csv", random_csv(11, 100));
  const auto r = run({"bound", "--input", path, "--eps", "0.4", "--verify", "--fw-tol", "1e-6"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["verification"]["passed"].get<bool>());
  EXPECT_TRUE(j["frank_wolfe"]["sandwich_holds"].get<bool>());
  EXPECT_GT(j["objective_nats"].get<double>(), 0.0);
}

TEST(CliTest, ClassPairAndBinaryInput) {
  const auto path = write_temp("classes.csv", "x,y,digit\n0,0,3\n0.1,0,7\n5,5,4\n");
  const auto r = run({"bound", "--input", path, "--eps", "1", "--classes", "3,7", "--no-timings"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["n_vertices"], 2);
  EXPECT_EQ(j["manifest"]["classes"]["plus"], "3");
  EXPECT_FALSE(j["manifest"].contains("timings"));
}

TEST(CliTest, DeterministicWithoutTimings) {
  const auto path = write_temp("det.csv", random_csv(5, 60));
  const std::vector<std::string> args{"sweep", "--input", path, "--eps-grid", "0:0.6:0.2",
                                      "--samples", "20,40", "--seeds", "1,2", "--threads", "3",
                                      "--no-timings"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto bound_args = std::vector<std::string>{"bound", "--input", path, "--eps", "0.3",
                                                   "--no-timings", "--emit-q"};
  EXPECT_EQ(run(bound_args).out, run(bound_args).out);
}

TEST(CliTest, SweepIsMonotoneInBudget) {
  const auto path = write_temp("sweep.csv", random_csv(8, 80));
  const auto r = run({"sweep", "--input", path, "--eps-grid", "0:1:0.1", "--threads", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = tsv_rows(r.out);
  ASSERT_EQ(rows.size(), 11u);
  double previous = -1.0;
  for (const auto& row : rows) {
    ASSERT_EQ(row.size(), 8u);
    EXPECT_EQ(row[1], "NA");
    const double objective = std::stod(row[3]);
    EXPECT_GE(objective, previous - 1e-12);
    previous = objective;
  }
  EXPECT_NEAR(std::stod(rows.front()[0]), 0.0, 0.0);
  EXPECT_NEAR(std::stod(rows.back()[0]), 1.0, 1e-12);
}

TEST(CliTest, GaussianAnalyticCases) {
  const auto r = run({"gaussian", "--mu", "1", "--var", "1", "--eps-grid", "0:1.5:0.5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = tsv_rows(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_NEAR(std::stod(rows[2][1]), std::numbers::ln2, 1e-10);
  EXPECT_NEAR(std::stod(rows[3][1]), std::numbers::ln2, 1e-10);
  EXPECT_LT(std::stod(rows[0][1]), std::stod(rows[1][1]));
}

TEST(CliTest, GaussianEmpiricalPipeline) {
  const auto r = run({"gaussian", "--dim", "2", "--eps-grid", "0.2:0.6:0.2", "--empirical", "150",
                      "--seed", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = tsv_rows(r.out);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) {
    ASSERT_EQ(row.size(), 9u);
    EXPECT_EQ(row[6], "150");
  }
}

TEST(CliTest, BenchRecordsRepeatsAndRatio) {
  const auto r = run({"bench", "--samples", "30", "--eps", "0.3", "--repeats", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = tsv_rows(r.out);
  ASSERT_EQ(rows.size(), 1u);
  ASSERT_EQ(rows[0].size(), 15u);
  EXPECT_EQ(rows[0][4], "4");
  EXPECT_EQ(rows[0][8], "4");
  EXPECT_EQ(rows[0][7], "ok");
  EXPECT_GT(std::stod(rows[0][14]), 0.0);
}

TEST(CliTest, BenchHonorsTimeout) {
  const auto r = run({"bench", "--samples", "600", "--eps", "0.5", "--repeats", "2", "--timeout",
                      "0.002", "--fw-tol", "1e-12"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = tsv_rows(r.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0][11], "timeout");
  EXPECT_EQ(rows[0][8], "0");
}

TEST(CliTest, GraphStatsAndOutputFile) {
  const auto path = write_temp("stats.csv", "0,0,1\n3,0,1\n1,0,-1\n");
  const auto out = (std::filesystem::temp_directory_path() / "advbound_cli_stats.tsv").string();
  const auto r = run({"graph-stats", "--input", path, "--eps-grid", "0:1:0.5", "--out", out});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream file(out);
  std::stringstream body;
  body << file.rdbuf();
  const auto rows = tsv_rows(body.str());
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][3], "0");
  EXPECT_EQ(rows[1][3], "1");  // distance 1 reached at eps 0.5
  EXPECT_EQ(rows[1][4], "0.5");
  EXPECT_EQ(rows[2][3], "2");
  EXPECT_EQ(rows[2][4], "1");
}

}  // namespace
}  // namespace advbound::cli
