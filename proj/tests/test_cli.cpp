// Copyright 2026 The sqlharness Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "sqlharness/ingest.hpp"
#include "support/test_support.hpp"

namespace sqlharness {
namespace {

using testing::run_cli;

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

TEST(Cli, HelpAndUsage) {
  std::string out;
  EXPECT_EQ(run_cli("--help", &out), 0);
  EXPECT_NE(out.find("selftest"), std::string::npos);
  EXPECT_EQ(run_cli("--no-such-flag selftest", &out), 1);
  EXPECT_EQ(run_cli("frobnicate", &out), 1);
  EXPECT_EQ(run_cli("", &out), 1);
}

TEST(Cli, SelftestSucceeds) {
  testing::TempDir dir;
  std::string out;
  EXPECT_EQ(run_cli("--dataset " + q(testing::mini_manifest()) + " --out " + q(dir.path()) + " selftest", &out), 0)
      << out;
  EXPECT_NE(out.find("CR 100.00%"), std::string::npos) << out;
  EXPECT_NE(out.find("databases unchanged: yes"), std::string::npos) << out;
}

TEST(Cli, ValidationFailureExitsTwo) {
  testing::TempDir dir;
  testing::write_file(dir / "profile.json", R"({"candidate_generation": {"correct": 0.5, "incorrect": 0.1, "error": 0}})");
  std::string out;
  EXPECT_EQ(run_cli("--dataset " + q(testing::mini_manifest()) + " --out " + q(dir / "o") + " mock --profile " +
                        q(dir / "profile.json"),
                    &out),
            2)
      << out;
  testing::write_file(dir / "cfg.json", R"({"comparison": "bag"})");
  EXPECT_EQ(run_cli("--config " + q(dir / "cfg.json") + " selftest", &out), 2) << out;
}

TEST(Cli, MissingDatabaseExitsThree) {
  testing::TempDir dir;
  const auto manifest = testing::copy_mini_dataset(dir / "data");
  std::filesystem::remove_all(dir / "data/databases/card_games");
  std::string out;
  EXPECT_EQ(run_cli("--dataset " + q(manifest) + " --out " + q(dir / "o") + " selftest", &out), 3) << out;
}

TEST(Cli, ValidateCountsUnknownQuestion) {
  testing::TempDir dir;
  const auto questions = load_dataset(load_manifest(testing::mini_manifest()));
  Json records = Json::array();
  for (const auto& question : questions) {
    records.push_back({{"node_type", "candidate_generation"}, {"question", question.question},
                       {"SQL", question.gold_sql}, {"token_cost", 10}, {"llm_calls", 1}});
  }
  records.push_back({{"node_type", "candidate_generation"}, {"question", "Who asked this?"}, {"SQL", "SELECT 1"},
                     {"token_cost", 10}, {"llm_calls", 1}});
  testing::write_file(dir / "runs/m.json", records.dump());
  std::string out;
  EXPECT_EQ(run_cli("--dataset " + q(testing::mini_manifest()) + " --runs " + q(dir / "runs") + " --out " +
                        q(dir / "o") + " validate",
                    &out),
            0)
      << out;
  EXPECT_NE(out.find("warnings: 1"), std::string::npos) << out;
}

TEST(Cli, FullRunThroughReport) {
  testing::TempDir dir;
  testing::write_file(dir / "profile.json", R"({"name": "m", "seed": 3, "questions": 10, "candidates": 2,
      "candidate_generation": {"correct": 0.5, "incorrect": 0.3, "error": 0.2}})");
  const std::string common = "--timeout 0.5 --workers 2 --out " + q(dir / "out");
  std::string out;
  ASSERT_EQ(run_cli("--dataset " + q(testing::mini_manifest()) + " --out " + q(dir / "mock") + " mock --profile " +
                        q(dir / "profile.json"),
                    &out),
            0)
      << out;
  const std::string data = "--dataset " + q(dir / "mock/dataset/manifest.json") + " --runs " + q(dir / "mock/runs");
  ASSERT_EQ(run_cli(data + " " + common + " postprocess", &out), 0) << out;
  ASSERT_EQ(run_cli(data + " " + common + " bench", &out), 0) << out;
  ASSERT_EQ(run_cli(data + " " + common + " report --format markdown --format csv", &out), 0) << out;
  EXPECT_TRUE(std::filesystem::exists(dir / "out/report/markdown/candidate_generation.md"));
  EXPECT_FALSE(std::filesystem::exists(dir / "out/report/report.json"));
}

}  // namespace
}  // namespace sqlharness
