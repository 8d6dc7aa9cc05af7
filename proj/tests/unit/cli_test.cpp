// Copyright 2026 The nbpm Authors.
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

#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "nbpm/io.hpp"

namespace nbpm::cli {
namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("nbpm_cli_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(CliTest, SampleWritesAMeasureThatParsesBack) {
  const CliRun json = run({"sample", "--process", "dirichlet", "--theta", "2", "--n", "500"});
  ASSERT_EQ(json.code, kExitOk) << json.err;
  const DiscreteMeasure m = io::measure_from_json(json.out);
  EXPECT_EQ(m.size() + m.provenance().dropped_underflow, 500u);
  EXPECT_EQ(m.provenance().seed, 42u);

  const CliRun csv =
      run({"sample", "--process", "dirichlet", "--theta", "2", "--n", "500", "--output", "csv"});
  ASSERT_EQ(csv.code, kExitOk) << csv.err;
  const DiscreteMeasure back = io::measure_from_csv(csv.out);
  EXPECT_EQ(back.weights(), m.weights());
  EXPECT_EQ(back.atoms(), m.atoms());
}

TEST(CliTest, OutputsAreByteIdenticalAcrossRunsAndJobs) {
  const std::vector<std::vector<std::string>> commands = {
      {"sample", "--process", "pdp_series", "--alpha", "0.5", "--theta", "1"},
      {"ks-table", "--alpha", "0.5", "--theta", "1", "--reps", "40", "--output", "csv"},
      {"weights", "--reps", "30", "--n", "300", "--top-k", "3"},
      {"clusters", "--reps", "20", "--n", "10,100", "--output", "csv"},
  };
  for (const auto& cmd : commands) {
    const CliRun a = run(cmd);
    const CliRun b = run(cmd);
    auto with_jobs = cmd;
    with_jobs.insert(with_jobs.end(), {"--jobs", "3"});
    const CliRun c = run(with_jobs);
    ASSERT_EQ(a.code, kExitOk) << cmd[0] << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << cmd[0];
    EXPECT_EQ(a.out, c.out) << cmd[0];
  }
}

TEST(CliTest, TablesParseBackThroughReaders) {
  const CliRun ks = run({"ks-table", "--alpha", "0.9", "--theta", "10", "--r", "11", "--reps",
                      "30"});
  ASSERT_EQ(ks.code, kExitOk) << ks.err;
  const io::Table t = io::table_from_json(ks.out);
  EXPECT_EQ(t.kind, "ks_table");
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.number(0, "r"), 11.0);
  EXPECT_EQ(t.number(0, "replications"), 30.0);
  EXPECT_GT(t.number(0, "mean_distance"), 0.0);
  const ExperimentSpec echo = io::experiment_spec_from_json(t.metadata.at("spec_echo.1"));
  EXPECT_EQ(echo.replications, 30u);
  EXPECT_EQ(echo.params.r, 11.0);

  const CliRun w = run({"weights", "--reps", "20", "--n", "200", "--output", "csv"});
  ASSERT_EQ(w.code, kExitOk) << w.err;
  const io::Table wt = io::table_from_csv(w.out);
  EXPECT_EQ(wt.kind, "weight_profile");
  EXPECT_EQ(wt.rows.size(), 40u);

  const CliRun c = run({"clusters", "--reps", "10", "--n", "50"});
  ASSERT_EQ(c.code, kExitOk) << c.err;
  EXPECT_EQ(io::table_from_json(c.out).kind, "growth");
}

TEST(CliTest, BundledTableHasNineRows) {
  const auto cfg = nlohmann::json::parse(bundled_table2_config());
  ASSERT_EQ(cfg.at("rows").size(), 9u);
  EXPECT_EQ(cfg.at("rows")[2].at("r"), 300);
  EXPECT_EQ(cfg.at("n"), 400);
  EXPECT_EQ(cfg.at("reps"), 500);
}

TEST(CliTest, DomainAndConfigErrorsExitOne) {
  EXPECT_EQ(run({"sample", "--process", "dirichlet", "--theta", "-1"}).code, kExitDomain);
  EXPECT_EQ(run({"sample", "--process", "nonsense"}).code, kExitDomain);
  EXPECT_EQ(run({"sample", "--bogus-flag"}).code, kExitDomain);
  EXPECT_EQ(run({}).code, kExitDomain);
  EXPECT_EQ(run({"sample", "--config", "/nonexistent/config.json"}).code, kExitDomain);

  const auto dir = temp_dir("config");
  std::ofstream(dir / "bad.json") << R"({"schema_version": 1, "thetta": 2})";
  std::ofstream(dir / "broken.json") << "{";
  std::ofstream(dir / "good.json") << R"({"schema_version": 1, "process": "dirichlet",
                                          "theta": 2, "n": 30, "output": "csv"})";
  EXPECT_EQ(run({"sample", "--config", (dir / "bad.json").string()}).code, kExitDomain);
  EXPECT_EQ(run({"sample", "--config", (dir / "broken.json").string()}).code, kExitDomain);
  const CliRun good = run({"sample", "--config", (dir / "good.json").string()});
  ASSERT_EQ(good.code, kExitOk) << good.err;
  EXPECT_EQ(io::measure_from_csv(good.out).size(), 30u);
  // Flags override config values.
  const CliRun flagged =
      run({"sample", "--config", (dir / "good.json").string(), "--n", "12", "--output", "json"});
  ASSERT_EQ(flagged.code, kExitOk) << flagged.err;
  EXPECT_EQ(io::measure_from_json(flagged.out).size(), 12u);
}

TEST(CliTest, FailedReplicationsExitTwo) {
  const CliRun r = run({"ks-table", "--process", "extended_dp", "--alpha", "0.5", "--theta", "1",
                     "--r", "1", "--n", "50", "--reps", "20"});
  EXPECT_EQ(r.code, kExitNumeric);
  EXPECT_NE(r.err.find("replications failed"), std::string::npos);
}

TEST(CliTest, SelftestPasses) {
  const CliRun r = run({"selftest", "--output", "csv"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const io::Table t = io::table_from_csv(r.out);
  EXPECT_GE(t.rows.size(), 5u);
  for (const auto& row : t.rows) EXPECT_EQ(std::get<std::string>(row[1]), "pass");
}

TEST(CliTest, OutputDirectoryFromEnvironment) {
  const auto dir = temp_dir("outdir") / "nested";
  ::setenv(kOutputDirEnv, dir.string().c_str(), 1);
  const CliRun r = run({"sample", "--process", "dirichlet", "--theta", "1", "--n", "20",
                     "--output", "csv"});
  ::unsetenv(kOutputDirEnv);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  const std::string text = read_file(dir / "sample.csv");
  EXPECT_EQ(io::measure_from_csv(text).size(), 20u);
}

}  // namespace
}  // namespace nbpm::cli
