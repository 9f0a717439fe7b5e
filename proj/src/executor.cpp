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

#include "sqlharness/executor.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "sqlharness/catalog.hpp"
#include "sqlharness/sql_lexer.hpp"
#include "sqlite_util.hpp"

namespace sqlharness {

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kProgressOps = 1000;

struct Deadline {
  Clock::time_point at;
  bool expired = false;
};

int progress_callback(void* arg) {
  auto* d = static_cast<Deadline*>(arg);
  if (Clock::now() >= d->at) {
    d->expired = true;
    return 1;
  }
  return 0;
}

// True when only whitespace, comments and semicolons remain.
bool is_blank_tail(const char* tail) {
  std::string_view s(tail ? tail : "");
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ';') {
      ++i;
    } else if (s.substr(i, 2) == "--") {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (s.substr(i, 2) == "/*") {
      auto end = s.find("*/", i + 2);
      i = end == std::string_view::npos ? s.size() : end + 2;
    } else {
      return false;
    }
  }
  return true;
}

Value read_value(sqlite3_stmt* stmt, int col) {
  switch (sqlite3_column_type(stmt, col)) {
    case SQLITE_INTEGER:
      return static_cast<std::int64_t>(sqlite3_column_int64(stmt, col));
    case SQLITE_FLOAT:
      return sqlite3_column_double(stmt, col);
    case SQLITE_TEXT: {
      const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt, col));
      return std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(stmt, col)));
    }
    case SQLITE_BLOB: {
      const auto* p = static_cast<const char*>(sqlite3_column_blob(stmt, col));
      return Blob{std::string(p ? p : "", static_cast<std::size_t>(sqlite3_column_bytes(stmt, col)))};
    }
    default:
      return std::monostate{};
  }
}

// Integral reals become integers so that 1 and 1.0 compare equal.
Value canonical(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) {
    constexpr double kLimit = 9223372036854775808.0;  // 2^63
    if (std::isfinite(*d) && std::trunc(*d) == *d && *d >= -kLimit && *d < kLimit) {
      return static_cast<std::int64_t>(*d);
    }
  }
  return v;
}

Rows canonical_rows(const Rows& rows, bool multiset) {
  Rows out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    Row c;
    c.reserve(r.size());
    for (const auto& v : r) c.push_back(canonical(v));
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end());
  if (!multiset) out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool values_close(const Value& a, const Value& b, double tol) {
  auto as_number = [](const Value& v) -> std::optional<double> {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&v)) return *d;
    return std::nullopt;
  };
  auto x = as_number(a);
  auto y = as_number(b);
  if (x && y) {
    double scale = std::max(std::fabs(*x), std::fabs(*y));
    return std::fabs(*x - *y) <= tol * scale;
  }
  return a == b;
}

bool rows_close(const Row& a, const Row& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!values_close(a[i], b[i], tol)) return false;
  }
  return true;
}

}  // namespace

namespace {

// Statements that could reach beyond the opened file or change connection
// state are refused at prepare time.
int deny_side_effects(void*, int action, const char*, const char*, const char*, const char*) {
  switch (action) {
    case SQLITE_ATTACH:
    case SQLITE_DETACH:
    case SQLITE_PRAGMA:
      return SQLITE_DENY;
    default:
      return SQLITE_OK;
  }
}

}  // namespace

struct QueryRunner::Impl {
  detail::DbHandle db;
};

QueryRunner::QueryRunner(const std::filesystem::path& db) : impl_(std::make_unique<Impl>()) {
  impl_->db = detail::open_read_only(db);
  sqlite3_set_authorizer(impl_->db.get(), &deny_side_effects, nullptr);
}
QueryRunner::~QueryRunner() = default;
QueryRunner::QueryRunner(QueryRunner&&) noexcept = default;
QueryRunner& QueryRunner::operator=(QueryRunner&&) noexcept = default;

ExecutionResult QueryRunner::run(const std::string& sql, Duration timeout) {
  sqlite3* db = impl_->db.get();
  ExecutionResult result;
  result.limit = timeout;
  const auto start = Clock::now();
  Deadline deadline{start + timeout};
  auto finish = [&](ExecutionResult::Status status, std::string message) {
    result.status = status;
    result.message = std::move(message);
    result.elapsed = std::chrono::duration_cast<Duration>(Clock::now() - start);
    if (status == ExecutionResult::Status::kTimedOut) result.rows.clear();
    return result;
  };

  sqlite3_progress_handler(db, kProgressOps, &progress_callback, &deadline);
  struct ClearHandler {
    sqlite3* db;
    ~ClearHandler() { sqlite3_progress_handler(db, 0, nullptr, nullptr); }
  } clear{db};

  sqlite3_stmt* raw = nullptr;
  const char* tail = nullptr;
  int rc = sqlite3_prepare_v2(db, sql.c_str(), static_cast<int>(sql.size()), &raw, &tail);
  detail::StmtHandle stmt(raw);
  if (rc != SQLITE_OK) {
    if (deadline.expired) return finish(ExecutionResult::Status::kTimedOut, "interrupted");
    return finish(ExecutionResult::Status::kFailure, sqlite3_errmsg(db));
  }
  if (!stmt) return finish(ExecutionResult::Status::kFailure, "empty statement");
  if (!is_blank_tail(tail)) {
    return finish(ExecutionResult::Status::kFailure, "You can only execute one statement at a time.");
  }
  if (!sqlite3_stmt_readonly(stmt.get())) {
    return finish(ExecutionResult::Status::kFailure, "attempt to write a readonly database");
  }

  const int columns = sqlite3_column_count(stmt.get());
  while ((rc = sqlite3_step(stmt.get())) == SQLITE_ROW) {
    Row row;
    row.reserve(static_cast<std::size_t>(columns));
    for (int c = 0; c < columns; ++c) row.push_back(read_value(stmt.get(), c));
    result.rows.push_back(std::move(row));
  }
  if (rc != SQLITE_DONE) {
    if (deadline.expired || rc == SQLITE_INTERRUPT) return finish(ExecutionResult::Status::kTimedOut, "interrupted");
    return finish(ExecutionResult::Status::kFailure, sqlite3_errmsg(db));
  }
  // The handler runs every kProgressOps instructions, so a statement can
  // finish slightly past the deadline.
  if (Clock::now() - start > timeout) return finish(ExecutionResult::Status::kTimedOut, "interrupted");
  return finish(ExecutionResult::Status::kRows, {});
}

ExecutionResult execute_query(const std::filesystem::path& db, const std::string& sql, Duration timeout) {
  QueryRunner runner(db);
  return runner.run(sql, timeout);
}

bool compare_results(const Rows& predicted, const Rows& gold, const CompareOptions& options) {
  Rows p = canonical_rows(predicted, options.multiset);
  Rows g = canonical_rows(gold, options.multiset);
  if (!options.relative_tolerance) return p == g;
  const double tol = *options.relative_tolerance;
  if (options.multiset) {
    if (p.size() != g.size()) return false;
    std::vector<bool> used(g.size(), false);
    for (const auto& row : p) {
      bool matched = false;
      for (std::size_t j = 0; j < g.size() && !matched; ++j) {
        if (!used[j] && rows_close(row, g[j], tol)) used[j] = matched = true;
      }
      if (!matched) return false;
    }
    return true;
  }
  auto covered = [tol](const Rows& from, const Rows& into) {
    return std::all_of(from.begin(), from.end(), [&](const Row& r) {
      return std::any_of(into.begin(), into.end(), [&](const Row& s) { return rows_close(r, s, tol); });
    });
  };
  return covered(p, g) && covered(g, p);
}

ErrorCategory classify_message(std::string_view message) {
  std::string lower(message);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower.find("no such table") != std::string::npos || lower.find("no such column") != std::string::npos) {
    return ErrorCategory::kNoTableOrColumn;
  }
  if (lower.find("no such function") != std::string::npos) return ErrorCategory::kNoFunction;
  if (lower.find("syntax error") != std::string::npos) return ErrorCategory::kSyntaxError;
  return ErrorCategory::kOther;
}

ErrorCategory classify_error(const ExecutionResult& failure) {
  switch (failure.status) {
    case ExecutionResult::Status::kTimedOut:
      return ErrorCategory::kTimeout;
    case ExecutionResult::Status::kFailure:
      return classify_message(failure.message);
    case ExecutionResult::Status::kRows:
      break;
  }
  throw std::invalid_argument("classify_error called on a successful result");
}

bool is_nondeterministic(std::string_view sql_text) {
  std::vector<sql::Token> tokens;
  try {
    tokens = sql::tokenize(sql_text);
  } catch (const sql::ParseError&) {
    return false;
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (t.kind == sql::TokenKind::kWord) {
      if ((t.upper == "RANDOM" || t.upper == "RANDOMBLOB") && tokens[i + 1].is_punct("(")) return true;
      if (t.upper == "CURRENT_DATE" || t.upper == "CURRENT_TIME" || t.upper == "CURRENT_TIMESTAMP") return true;
    }
    if (t.kind == sql::TokenKind::kString) {
      std::string lower = t.text;
      std::transform(lower.begin(), lower.end(), lower.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (lower == "'now'") return true;
    }
  }
  return false;
}

const ExecutionResult& GoldCache::get_or_run(const QuestionRecord& q, QueryRunner& runner, Duration timeout) {
  {
    std::lock_guard lock(mu_);
    if (auto it = results_.find(q.question_id); it != results_.end()) return *it->second;
  }
  auto computed = std::make_shared<const ExecutionResult>(runner.run(q.gold_sql, timeout));
  std::lock_guard lock(mu_);
  auto [it, inserted] = results_.emplace(q.question_id, std::move(computed));
  return *it->second;
}

Judgment judge(const QuestionRecord& question, const std::string& predicted_sql, QueryRunner& runner,
               const JudgeOptions& options, GoldCache* gold_cache, ModuleKind stage, std::uint64_t candidate_index) {
  std::optional<ExecutionResult> local_gold;
  const ExecutionResult* gold;
  if (gold_cache) {
    gold = &gold_cache->get_or_run(question, runner, options.timeout);
  } else {
    local_gold = runner.run(question.gold_sql, options.timeout);
    gold = &*local_gold;
  }
  if (!gold->ok()) {
    throw GoldUnexecutable(question.question_id, gold->timed_out() ? "timeout" : gold->message, gold->timed_out());
  }

  Judgment j;
  j.question_id = question.question_id;
  j.stage = stage;
  j.candidate_index = candidate_index;
  j.gold_elapsed = gold->elapsed;
  ExecutionResult predicted = runner.run(predicted_sql, options.timeout);
  j.predicted_elapsed = predicted.elapsed;
  if (!predicted.ok()) {
    j.label = OutcomeLabel::error(classify_error(predicted));
    j.detail = predicted.timed_out() ? "timeout" : predicted.message;
    return j;
  }
  if (compare_results(predicted.rows, gold->rows, options.compare)) {
    j.label = OutcomeLabel::correct();
  } else {
    j.label = OutcomeLabel::incorrect();
    j.detail = "result mismatch: predicted " + std::to_string(predicted.rows.size()) + " rows, gold " +
               std::to_string(gold->rows.size()) + " rows";
  }
  return j;
}

Judgment judge(const QuestionRecord& question, const std::string& predicted_sql, const std::filesystem::path& db,
               const JudgeOptions& options, GoldCache* gold_cache, ModuleKind stage, std::uint64_t candidate_index) {
  QueryRunner runner(db);
  return judge(question, predicted_sql, runner, options, gold_cache, stage, candidate_index);
}

}  // namespace sqlharness
