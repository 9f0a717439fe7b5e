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

// Sandboxed execution of predicted and gold SQL, result comparison and
// outcome judging.

#ifndef SQLHARNESS_EXECUTOR_HPP_
#define SQLHARNESS_EXECUTOR_HPP_

#include <chrono>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sqlharness/model.hpp"

struct sqlite3;

namespace sqlharness {

using Duration = std::chrono::microseconds;

inline constexpr std::chrono::milliseconds kDefaultTimeout{30000};

struct Blob {
  std::string bytes;
  auto operator<=>(const Blob&) const = default;
};

// NULL, INTEGER, REAL, TEXT, BLOB.
using Value = std::variant<std::monostate, std::int64_t, double, std::string, Blob>;
using Row = std::vector<Value>;
using Rows = std::vector<Row>;

struct ExecutionResult {
  enum class Status { kRows, kFailure, kTimedOut };
  Status status = Status::kRows;
  Rows rows;
  std::string message;
  Duration elapsed{0};
  Duration limit{0};

  bool ok() const { return status == Status::kRows; }
  bool timed_out() const { return status == Status::kTimedOut; }
};

// One read-only connection. Not thread-safe; give each worker its own.
class QueryRunner {
 public:
  explicit QueryRunner(const std::filesystem::path& db);
  ~QueryRunner();
  QueryRunner(QueryRunner&&) noexcept;
  QueryRunner& operator=(QueryRunner&&) noexcept;
  QueryRunner(const QueryRunner&) = delete;
  QueryRunner& operator=(const QueryRunner&) = delete;

  // The running statement is interrupted once `timeout` expires. Only
  // single read-only statements are executed.
  ExecutionResult run(const std::string& sql, Duration timeout);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Opens a connection for one query. Throws DatabaseError if the database
// cannot be opened.
ExecutionResult execute_query(const std::filesystem::path& db, const std::string& sql, Duration timeout);

struct CompareOptions {
  bool multiset = false;
  // Relative tolerance for REAL comparison; nullopt compares exactly.
  std::optional<double> relative_tolerance;
};

// Row order never matters; column order always does. Integer 1 equals real
// 1.0 and NULL equals NULL.
bool compare_results(const Rows& predicted, const Rows& gold, const CompareOptions& options = {});

// Case-insensitive substring match with precedence table/column, function,
// syntax; anything else is Other. Throws std::invalid_argument for a
// successful result.
ErrorCategory classify_error(const ExecutionResult& failure);
ErrorCategory classify_message(std::string_view message);

// Random or current-time functions make a query's result unstable.
bool is_nondeterministic(std::string_view sql);

struct Judgment {
  QuestionId question_id = 0;
  ModuleKind stage = ModuleKind::kCandidateGeneration;
  std::uint64_t candidate_index = 0;
  OutcomeLabel label;
  Duration predicted_elapsed{0};
  Duration gold_elapsed{0};
  std::optional<std::string> detail;
};

// Thrown when the gold query itself fails or times out; the question is
// excluded rather than counted against the method.
class GoldUnexecutable : public std::runtime_error {
 public:
  GoldUnexecutable(QuestionId id, std::string message, bool timed_out)
      : std::runtime_error("gold SQL of question " + std::to_string(id) + " is unexecutable: " + message),
        question_id(id),
        engine_message(std::move(message)),
        timed_out(timed_out) {}
  QuestionId question_id;
  std::string engine_message;
  bool timed_out;
};

// Gold results computed once per question and shared by all candidates.
class GoldCache {
 public:
  const ExecutionResult& get_or_run(const QuestionRecord& q, QueryRunner& runner, Duration timeout);

 private:
  std::mutex mu_;
  std::map<QuestionId, std::shared_ptr<const ExecutionResult>> results_;
};

struct JudgeOptions {
  Duration timeout = kDefaultTimeout;
  CompareOptions compare;
};

Judgment judge(const QuestionRecord& question, const std::string& predicted_sql, QueryRunner& runner,
               const JudgeOptions& options, GoldCache* gold_cache, ModuleKind stage = ModuleKind::kCandidateGeneration,
               std::uint64_t candidate_index = 0);

Judgment judge(const QuestionRecord& question, const std::string& predicted_sql, const std::filesystem::path& db,
               const JudgeOptions& options, GoldCache* gold_cache = nullptr,
               ModuleKind stage = ModuleKind::kCandidateGeneration, std::uint64_t candidate_index = 0);

}  // namespace sqlharness

#endif  // SQLHARNESS_EXECUTOR_HPP_
