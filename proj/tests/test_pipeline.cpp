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
#include "sqlharness/mockgen.hpp"
#include "sqlharness/pipeline.hpp"
#include "support/test_support.hpp"

namespace sqlharness {
namespace {

namespace fs = std::filesystem;

// Run file with the gold SQL of every mini question; `edit` may change one.
void write_gold_run(const fs::path& runs_dir, const std::string& method,
                    const std::function<void(QuestionId, std::string&)>& edit = {}) {
  const auto questions = load_dataset(load_manifest(testing::mini_manifest()));
  Json records = Json::array();
  for (const auto& q : questions) {
    RunRecord r;
    r.node_type = ModuleKind::kCandidateGeneration;
    r.question = q.question;
    r.question_id = q.question_id;
    r.db_id = q.db_id;
    r.sql = q.gold_sql;
    r.token_cost = 1000;
    r.llm_calls = 1;
    r.candidate_index = 0;
    if (edit) edit(q.question_id, *r.sql);
    records.push_back(serialize_record(r));
  }
  testing::write_file(runs_dir / (method + ".json"), records.dump(2));
}

std::vector<Judgment> read_judgments(const fs::path& out, const std::string& method) {
  const auto doc = read_json_file(out / "postprocess" / method / "judgments.json");
  std::vector<Judgment> j;
  for (const auto& e : doc.at("judgments")) j.push_back(judgment_from_json(e));
  return j;
}

const Json& all_stratum(const Json& metrics, const std::string& method, const char* stage) {
  return metrics.at("methods").at(method).at("stages").at(stage).at("strata").at("all");
}

TEST(Pipeline, OneBadTableGivesOneError) {
  testing::TempDir dir;
  write_gold_run(dir / "runs", "m", [](QuestionId id, std::string& sql) {
    if (id == 0) sql = "SELECT COUNT(id) FROM cardz WHERE toughness = 99";
  });
  const auto cfg = testing::make_config(testing::mini_manifest(), dir / "runs", dir / "out");
  const auto summary = run_postprocess(cfg);
  EXPECT_EQ(summary.judgments, 22u);
  const auto judgments = read_judgments(cfg.out, "m");
  std::size_t errors = 0;
  for (const auto& j : judgments) {
    if (j.label.is_error()) {
      ++errors;
      EXPECT_EQ(j.question_id, 0);
      EXPECT_EQ(j.label, OutcomeLabel::error(ErrorCategory::kNoTableOrColumn));
    } else {
      EXPECT_TRUE(j.label.is_correct()) << j.question_id;
    }
  }
  EXPECT_EQ(errors, 1u);
  const auto metrics = run_bench(cfg);
  const auto& all = all_stratum(metrics, "m", "candidate_generation");
  EXPECT_EQ(all.at("error_breakdown").at("no_such_table_or_column"), 1);
  EXPECT_EQ(all.at("correct_rate").at("exact"), "21/22");
}

TEST(Pipeline, IdempotentOutputs) {
  testing::TempDir dir;
  write_gold_run(dir / "runs", "m", [](QuestionId id, std::string& sql) {
    if (id % 3 == 1) sql = "SELECT 1";
  });
  const auto cfg = testing::make_config(testing::mini_manifest(), dir / "runs", dir / "out", 3);
  run_postprocess(cfg);
  run_bench(cfg);
  run_report(cfg);
  const auto first = testing::snapshot_tree(cfg.out);
  run_postprocess(cfg);
  run_bench(cfg);
  run_report(cfg);
  EXPECT_EQ(testing::snapshot_tree(cfg.out), first);
  EXPECT_TRUE(first.count("bench/metrics.json"));
  EXPECT_TRUE(first.count("report/manifest.json"));
}

TEST(Pipeline, MissingPredictionIsError) {
  testing::TempDir dir;
  write_gold_run(dir / "runs", "m");
  auto records = read_json_file(dir / "runs/m.json");
  records.erase(records.begin());
  testing::write_file(dir / "runs/m.json", records.dump());
  const auto cfg = testing::make_config(testing::mini_manifest(), dir / "runs", dir / "out");
  run_postprocess(cfg);
  for (const auto& j : read_judgments(cfg.out, "m")) {
    if (j.question_id == 0) {
      EXPECT_EQ(j.label, OutcomeLabel::error(ErrorCategory::kOther));
      EXPECT_EQ(j.detail, std::optional<std::string>("missing prediction"));
    }
  }
}

TEST(Pipeline, GoldUnexecutableIsAudited) {
  testing::TempDir dir;
  const auto manifest = testing::copy_mini_dataset(dir / "data", [](Json& q) {
    q[4]["SQL"] = "SELECT * FROM table_that_is_gone";
  });
  const QuestionId broken = read_json_file(dir / "data/dev.json")[4]["question_id"];
  auto cfg = testing::make_config(manifest, dir / "runs", dir / "out");
  const auto self = run_selftest(cfg);
  ASSERT_EQ(self.excluded.size(), 1u);
  EXPECT_EQ(self.excluded[0].question_id, broken);
  EXPECT_TRUE(self.passed());
  EXPECT_EQ(self.rates->questions, 21u);

  write_gold_run(dir / "runs", "m");
  run_postprocess(cfg);
  const auto audit = read_json_file(cfg.out / "postprocess/gold_audit.json");
  ASSERT_EQ(audit.at("excluded").size(), 1u);
  EXPECT_EQ(audit.at("excluded")[0].at("question_id"), broken);
  const auto metrics = run_bench(cfg);
  EXPECT_EQ(metrics.at("header").at("excluded_count"), 1);
  EXPECT_EQ(all_stratum(metrics, "m", "candidate_generation").at("questions"), 21);
}

TEST(Pipeline, SelftestOnMini) {
  testing::TempDir dir;
  const auto cfg = testing::make_config(testing::mini_manifest(), dir / "runs", dir / "out");
  const auto r = run_selftest(cfg);
  EXPECT_EQ(r.questions, 22u);
  EXPECT_TRUE(r.excluded.empty());
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.rates->correct_rate, 1);
}

TEST(Pipeline, MissingPricingWarnsWithoutCosts) {
  testing::TempDir dir;
  write_gold_run(dir / "runs", "m");
  auto cfg = testing::make_config(testing::mini_manifest(), dir / "runs", dir / "out");
  cfg.pricing = dir / "no_such_pricing.json";
  cfg.model = "x";
  run_postprocess(cfg);
  std::vector<std::string> warnings;
  const auto metrics = run_bench(cfg, &warnings);
  EXPECT_EQ(metrics.at("header").at("pricing"), "missing");
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_TRUE(metrics.at("methods").at("m").at("stages").at("candidate_generation").at("cost").is_null());
}

TEST(Pipeline, PricingProducesCost) {
  testing::TempDir dir;
  write_gold_run(dir / "runs", "m");
  testing::write_file(dir / "pricing.json", R"({"currency": "USD", "models": [{"name": "x",
      "prompt_cache_hit": "0.0001", "prompt_cache_miss": "0.0002", "completion": "0.0004"}]})");
  auto cfg = testing::make_config(testing::mini_manifest(), dir / "runs", dir / "out");
  cfg.pricing = dir / "pricing.json";
  cfg.model = "x";
  run_postprocess(cfg);
  const auto metrics = run_bench(cfg);
  // 1000 tokens split 800/200: 800·0.00015 + 200·0.0004 = 0.2.
  const auto& cost = metrics.at("methods").at("m").at("stages").at("candidate_generation").at("cost");
  EXPECT_EQ(cost.at("mean_per_question").at("exact"), "1/5");
}

TEST(Pipeline, PassAtOneEqualsCorrectRate) {
  testing::TempDir dir;
  write_gold_run(dir / "runs", "m", [](QuestionId id, std::string& sql) {
    if (id % 4 == 0) sql = "SELECT 12345";
  });
  auto cfg = testing::make_config(testing::mini_manifest(), dir / "runs", dir / "out");
  cfg.k_list = {1};
  run_postprocess(cfg);
  const auto metrics = run_bench(cfg);
  const auto& all = all_stratum(metrics, "m", "candidate_generation");
  EXPECT_EQ(all.at("pass_at_k").at("1").at("exact"), all.at("correct_rate").at("exact"));
  EXPECT_EQ(all.at("pass_at_k").size(), 1u);
}

TEST(Pipeline, MockLoopCloses) {
  testing::TempDir dir;
  const auto profile = parse_profile(testing::mock_profile_matrix().back());
  const auto mock = generate(profile, load_manifest(testing::mini_manifest()));
  write_mock(mock, dir.path());
  const auto cfg = testing::make_config(dir / "dataset/manifest.json", dir / "runs", dir / "out", 2);
  run_postprocess(cfg);
  const auto metrics = run_bench(cfg);
  const auto mismatches = compare_expected(read_json_file(dir / "expected.json"), metrics);
  EXPECT_TRUE(mismatches.empty()) << mismatches.front();
}

TEST(Pipeline, ValidateReportsUnknownQuestion) {
  testing::TempDir dir;
  write_gold_run(dir / "runs", "m");
  auto records = read_json_file(dir / "runs/m.json");
  records[0]["question"] = "A question nobody asked";
  records[0].erase("question_id");
  testing::write_file(dir / "runs/m.json", records.dump());
  const auto report = run_validate(testing::make_config(testing::mini_manifest(), dir / "runs", dir / "out"));
  EXPECT_EQ(report.warning_count(), 1u);
  ASSERT_EQ(report.methods.size(), 1u);
  EXPECT_EQ(report.methods[0].unmatched.size(), 1u);
}

TEST(Config, LoadsAndResolves) {
  testing::TempDir dir;
  testing::write_file(dir / "cfg.json", R"({"dataset": "d/manifest.json", "runs": "r", "out": "/abs/out",
      "timeout_ms": 1500, "comparison": "multiset", "k": [1, 3], "workers": 2, "overlap": "overlap"})");
  const auto c = load_config(dir / "cfg.json");
  EXPECT_EQ(c.dataset, dir / "d/manifest.json");
  EXPECT_EQ(c.runs, dir / "r");
  EXPECT_EQ(c.out, fs::path("/abs/out"));
  EXPECT_EQ(c.timeout.count(), 1500);
  EXPECT_TRUE(c.multiset);
  EXPECT_EQ(c.k_list, (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(c.overlap, CoefficientKind::kOverlap);
  EXPECT_THROW(config_from_json(Json::parse(R"({"comparison": "bag"})"), dir.path()), ValidationError);
  EXPECT_THROW(config_from_json(Json::parse(R"({"k": [0]})"), dir.path()), ValidationError);
}

TEST(Judgments, JsonRoundTrip) {
  Judgment j;
  j.question_id = 4;
  j.stage = ModuleKind::kQueryRevision;
  j.candidate_index = 2;
  j.label = OutcomeLabel::error(ErrorCategory::kTimeout);
  j.detail = "interrupted";
  const auto back = judgment_from_json(judgment_to_json(j, false));
  EXPECT_EQ(back.question_id, 4);
  EXPECT_EQ(back.stage, ModuleKind::kQueryRevision);
  EXPECT_EQ(back.candidate_index, 2u);
  EXPECT_EQ(back.label, j.label);
  EXPECT_EQ(back.detail, j.detail);
  EXPECT_FALSE(judgment_to_json(j, false).contains("predicted_elapsed_us"));
}

}  // namespace
}  // namespace sqlharness
