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

#include "sqlharness/model.hpp"

namespace sqlharness {
namespace {

Json cg_record() {
  return {{"node_type", "candidate_generation"},
          {"question", "How many cards?"},
          {"SQL", "SELECT COUNT(*) FROM cards"},
          {"token_cost", 120},
          {"llm_calls", 1}};
}

RecordIssue issue_of(const Json& raw) {
  try {
    validate_record(raw, 4);
  } catch (const RecordError& e) {
    return e.issue();
  }
  ADD_FAILURE() << "no error for " << raw.dump();
  return {};
}

TEST(Identifier, Normalization) {
  EXPECT_EQ(normalize_identifier("Cards"), "cards");
  EXPECT_EQ(normalize_identifier("\"Free Meal Count\""), "free meal count");
  EXPECT_EQ(normalize_identifier("`setCode`"), "setcode");
  EXPECT_EQ(normalize_identifier("[School Name]"), "school name");
  EXPECT_EQ(normalize_identifier("\"a\"\"b\""), "a\"b");
  EXPECT_THROW(normalize_identifier(""), ValidationError);
  EXPECT_THROW(normalize_identifier("\"\""), ValidationError);
}

TEST(SchemaSet, JsonRoundTripNormalizes) {
  SchemaSet s = schema_from_json(Json::parse(R"({"Cards": ["ID", "toughness"], "sets": []})"));
  EXPECT_EQ(s.tables(), (std::set<std::string>{"cards", "sets"}));
  EXPECT_EQ(s.columns().size(), 2u);
  EXPECT_EQ(schema_from_json(to_json(s)), s);
  EXPECT_THROW(schema_from_json(Json::parse(R"(["cards"])")), ValidationError);
}

TEST(RunRecord, ValidRecordRoundTrips) {
  Json raw = cg_record();
  raw["prompt_tokens"] = 100;
  raw["completion_tokens"] = 20;
  raw["candidate_index"] = 2;
  const RunRecord r = validate_record(raw);
  EXPECT_EQ(r.node_type, ModuleKind::kCandidateGeneration);
  EXPECT_EQ(*r.candidate_index, 2u);
  EXPECT_EQ(validate_record(serialize_record(r)), r);
}

TEST(RunRecord, FieldLevelErrors) {
  Json missing = cg_record();
  missing.erase("node_type");
  EXPECT_EQ(issue_of(missing).field, "node_type");
  EXPECT_EQ(issue_of(missing).record_index, 4u);

  Json mismatch = cg_record();
  mismatch["extracted_schema"] = {{"cards", {"id"}}};
  EXPECT_NE(issue_of(mismatch).message.find("payload mismatch"), std::string::npos);

  Json schema_with_sql = {{"node_type", "schema_selection"},
                          {"question", "q"},
                          {"extracted_schema", {{"cards", {"id"}}}},
                          {"SQL", "SELECT 1"},
                          {"token_cost", 1},
                          {"llm_calls", 1}};
  EXPECT_EQ(issue_of(schema_with_sql).field, "SQL");

  Json negative = cg_record();
  negative["token_cost"] = -5;
  EXPECT_EQ(issue_of(negative).field, "token_cost");

  Json split = cg_record();
  split["prompt_tokens"] = 100;
  split["completion_tokens"] = 10;
  EXPECT_EQ(issue_of(split).field, "prompt_tokens");

  Json unknown = cg_record();
  unknown["node_type"] = "planner";
  EXPECT_EQ(issue_of(unknown).field, "node_type");
}

TEST(RunFile, InvalidRecordsAreReportedAndSkipped) {
  Json bad = cg_record();
  bad.erase("SQL");
  const RunFile f = validate_run_file(Json::array({cg_record(), bad, cg_record()}));
  EXPECT_EQ(f.records.size(), 2u);
  ASSERT_EQ(f.issues.size(), 1u);
  EXPECT_EQ(f.issues[0].record_index, 1u);
  EXPECT_EQ(validate_run_file(Json::object()).issues.size(), 1u);
}

TEST(Enums, StringsRoundTrip) {
  for (auto k : {ModuleKind::kSchemaSelection, ModuleKind::kCandidateGeneration, ModuleKind::kQueryRevision}) {
    EXPECT_EQ(parse_module_kind(to_string(k)), k);
  }
  for (auto c : kAllErrorCategories) EXPECT_EQ(parse_error_category(to_string(c)), c);
  EXPECT_EQ(parse_difficulty(""), Difficulty::kUnlabeled);
  EXPECT_EQ(parse_difficulty("challenging"), Difficulty::kChallenging);
  EXPECT_FALSE(parse_difficulty("impossible").has_value());
  EXPECT_EQ(describe(OutcomeLabel::error(ErrorCategory::kTimeout)), "error(timeout)");
}

}  // namespace
}  // namespace sqlharness
