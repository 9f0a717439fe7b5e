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

// Shared domain types: schema sets, run records, dataset questions and
// outcome labels.

#ifndef SQLHARNESS_MODEL_HPP_
#define SQLHARNESS_MODEL_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace sqlharness {

using Json = nlohmann::json;
using QuestionId = std::int64_t;

inline constexpr std::string_view kHarnessVersion = "0.3.0";

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lowercases and strips one pair of surrounding quote characters ("", ``, []).
// Throws ValidationError on empty input.
std::string normalize_identifier(std::string_view raw);

// Table name -> set of column names, all canonical. A table with an empty
// column set is a table-level reference (columns unknown or SELECT *).
class SchemaSet {
 public:
  using Entries = std::map<std::string, std::set<std::string>>;

  SchemaSet() = default;

  void add_table(std::string_view table);
  void add_column(std::string_view table, std::string_view column);

  const Entries& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  std::set<std::string> tables() const;
  std::set<std::pair<std::string, std::string>> columns() const;

  bool operator==(const SchemaSet&) const = default;

 private:
  Entries entries_;
};

Json to_json(const SchemaSet& schema);
// Expects {"table": ["col", ...], ...}; identifiers are normalized.
SchemaSet schema_from_json(const Json& j);

enum class ModuleKind { kSchemaSelection, kCandidateGeneration, kQueryRevision };

std::string_view to_string(ModuleKind kind);
std::optional<ModuleKind> parse_module_kind(std::string_view text);

struct RunRecord {
  ModuleKind node_type = ModuleKind::kSchemaSelection;
  std::string question;
  std::optional<QuestionId> question_id;
  std::optional<std::string> db_id;
  std::optional<SchemaSet> extracted_schema;
  std::optional<std::string> sql;
  std::uint64_t token_cost = 0;
  std::uint64_t llm_calls = 0;
  std::optional<std::uint64_t> prompt_tokens;
  std::optional<std::uint64_t> completion_tokens;
  std::optional<std::uint64_t> candidate_index;

  bool operator==(const RunRecord&) const = default;
};

// A field-level problem in one record of a run file.
struct RecordIssue {
  std::size_t record_index = 0;
  std::string field;
  std::string message;

  std::string describe() const;
};

class RecordError : public ValidationError {
 public:
  explicit RecordError(RecordIssue issue)
      : ValidationError(issue.describe()), issue_(std::move(issue)) {}
  const RecordIssue& issue() const { return issue_; }

 private:
  RecordIssue issue_;
};

// Checks every RunRecord invariant. Throws RecordError naming the record
// index and offending field.
RunRecord validate_record(const Json& raw, std::size_t record_index = 0);

Json serialize_record(const RunRecord& record);

struct RunFile {
  std::vector<RunRecord> records;
  std::vector<RecordIssue> issues;
};

// Validates every element of a run-file array. Invalid records are reported
// in `issues` and skipped.
RunFile validate_run_file(const Json& raw);

enum class Difficulty { kSimple, kModerate, kChallenging, kUnlabeled };

std::string_view to_string(Difficulty d);
std::optional<Difficulty> parse_difficulty(std::string_view text);

struct QuestionRecord {
  QuestionId question_id = 0;
  std::string db_id;
  std::string question;
  std::string gold_sql;
  Difficulty difficulty = Difficulty::kUnlabeled;
  std::optional<std::string> evidence;
};

struct UsageStats {
  std::uint64_t tokens = 0;
  std::uint64_t llm_calls = 0;
  std::optional<std::uint64_t> prompt_tokens;
  std::optional<std::uint64_t> completion_tokens;
};

enum class ErrorCategory { kNoTableOrColumn, kNoFunction, kSyntaxError, kTimeout, kOther };

inline constexpr ErrorCategory kAllErrorCategories[] = {
    ErrorCategory::kNoTableOrColumn, ErrorCategory::kNoFunction, ErrorCategory::kSyntaxError,
    ErrorCategory::kTimeout, ErrorCategory::kOther};

std::string_view to_string(ErrorCategory c);
std::optional<ErrorCategory> parse_error_category(std::string_view text);

enum class Outcome { kCorrect, kIncorrect, kError };

struct OutcomeLabel {
  Outcome outcome = Outcome::kCorrect;
  ErrorCategory category = ErrorCategory::kOther;  // meaningful only for kError

  static OutcomeLabel correct() { return {Outcome::kCorrect, ErrorCategory::kOther}; }
  static OutcomeLabel incorrect() { return {Outcome::kIncorrect, ErrorCategory::kOther}; }
  static OutcomeLabel error(ErrorCategory c) { return {Outcome::kError, c}; }

  bool is_correct() const { return outcome == Outcome::kCorrect; }
  bool is_incorrect() const { return outcome == Outcome::kIncorrect; }
  bool is_error() const { return outcome == Outcome::kError; }

  bool operator==(const OutcomeLabel& o) const {
    return outcome == o.outcome && (outcome != Outcome::kError || category == o.category);
  }
};

std::string_view to_string(Outcome o);
std::optional<Outcome> parse_outcome(std::string_view text);
std::string describe(const OutcomeLabel& label);

}  // namespace sqlharness

#endif  // SQLHARNESS_MODEL_HPP_
