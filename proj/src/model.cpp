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

#include "sqlharness/model.hpp"

#include <algorithm>
#include <cctype>

namespace sqlharness {

std::string normalize_identifier(std::string_view raw) {
  if (raw.empty()) throw ValidationError("identifier must be non-empty");
  std::string_view body = raw;
  char close = 0;
  if (raw.size() >= 2) {
    switch (raw.front()) {
      case '"': close = '"'; break;
      case '`': close = '`'; break;
      case '[': close = ']'; break;
      default: break;
    }
  }
  std::string out;
  if (close != 0 && raw.back() == close) {
    body = raw.substr(1, raw.size() - 2);
    // A doubled closing quote inside a quoted identifier is an escaped quote.
    for (std::size_t i = 0; i < body.size(); ++i) {
      out.push_back(body[i]);
      if (close != ']' && body[i] == close && i + 1 < body.size() && body[i + 1] == close) ++i;
    }
  } else {
    out.assign(body);
  }
  if (out.empty()) throw ValidationError("identifier must be non-empty");
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void SchemaSet::add_table(std::string_view table) {
  entries_.try_emplace(normalize_identifier(table));
}

void SchemaSet::add_column(std::string_view table, std::string_view column) {
  entries_[normalize_identifier(table)].insert(normalize_identifier(column));
}

std::set<std::string> SchemaSet::tables() const {
  std::set<std::string> out;
  for (const auto& [table, _] : entries_) out.insert(table);
  return out;
}

std::set<std::pair<std::string, std::string>> SchemaSet::columns() const {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [table, cols] : entries_) {
    for (const auto& c : cols) out.emplace(table, c);
  }
  return out;
}

Json to_json(const SchemaSet& schema) {
  Json j = Json::object();
  for (const auto& [table, cols] : schema.entries()) {
    Json arr = Json::array();
    for (const auto& c : cols) arr.push_back(c);
    j[table] = std::move(arr);
  }
  return j;
}

SchemaSet schema_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("schema must be an object of table -> column list");
  SchemaSet out;
  for (const auto& [table, cols] : j.items()) {
    out.add_table(table);
    if (cols.is_null()) continue;
    if (!cols.is_array()) throw ValidationError("columns of table '" + table + "' must be a list");
    for (const auto& c : cols) {
      if (!c.is_string()) throw ValidationError("column names of table '" + table + "' must be strings");
      out.add_column(table, c.get<std::string>());
    }
  }
  return out;
}

std::string_view to_string(ModuleKind kind) {
  switch (kind) {
    case ModuleKind::kSchemaSelection: return "schema_selection";
    case ModuleKind::kCandidateGeneration: return "candidate_generation";
    case ModuleKind::kQueryRevision: return "query_revision";
  }
  return "?";
}

std::optional<ModuleKind> parse_module_kind(std::string_view text) {
  if (text == "schema_selection") return ModuleKind::kSchemaSelection;
  if (text == "candidate_generation") return ModuleKind::kCandidateGeneration;
  if (text == "query_revision") return ModuleKind::kQueryRevision;
  return std::nullopt;
}

std::string RecordIssue::describe() const {
  return "record " + std::to_string(record_index) + ", field '" + field + "': " + message;
}

namespace {

[[noreturn]] void fail(std::size_t index, std::string field, std::string message) {
  throw RecordError(RecordIssue{index, std::move(field), std::move(message)});
}

std::optional<std::uint64_t> read_count(const Json& raw, const char* field, std::size_t index,
                                        bool required) {
  auto it = raw.find(field);
  if (it == raw.end() || it->is_null()) {
    if (required) fail(index, field, std::string("missing ") + field);
    return std::nullopt;
  }
  if (it->is_number_integer()) {
    if (it->is_number_unsigned()) return it->get<std::uint64_t>();
    auto v = it->get<std::int64_t>();
    if (v < 0) fail(index, field, std::string("negative ") + field);
    return static_cast<std::uint64_t>(v);
  }
  if (it->is_number_float()) {
    double v = it->get<double>();
    if (v < 0) fail(index, field, std::string("negative ") + field);
    if (v != static_cast<double>(static_cast<std::uint64_t>(v))) {
      fail(index, field, std::string(field) + " must be an integer");
    }
    return static_cast<std::uint64_t>(v);
  }
  fail(index, field, std::string(field) + " must be a non-negative integer");
}

}  // namespace

RunRecord validate_record(const Json& raw, std::size_t index) {
  if (!raw.is_object()) fail(index, "<record>", "record must be an object");
  RunRecord rec;

  auto nt = raw.find("node_type");
  if (nt == raw.end() || nt->is_null()) fail(index, "node_type", "missing node_type");
  if (!nt->is_string()) fail(index, "node_type", "node_type must be a string");
  auto kind = parse_module_kind(nt->get<std::string>());
  if (!kind) fail(index, "node_type", "unknown node_type '" + nt->get<std::string>() + "'");
  rec.node_type = *kind;

  if (auto it = raw.find("question_id"); it != raw.end() && !it->is_null()) {
    if (!it->is_number_integer()) fail(index, "question_id", "question_id must be an integer");
    rec.question_id = it->get<QuestionId>();
  }
  if (auto it = raw.find("question"); it != raw.end() && !it->is_null()) {
    if (!it->is_string()) fail(index, "question", "question must be a string");
    rec.question = it->get<std::string>();
  } else if (!rec.question_id) {
    fail(index, "question", "missing question");
  }
  if (auto it = raw.find("db_id"); it != raw.end() && !it->is_null()) {
    if (!it->is_string()) fail(index, "db_id", "db_id must be a string");
    rec.db_id = it->get<std::string>();
  }

  const bool has_schema = raw.contains("extracted_schema") && !raw["extracted_schema"].is_null();
  const bool has_sql = raw.contains("SQL") && !raw["SQL"].is_null();
  if (rec.node_type == ModuleKind::kSchemaSelection) {
    if (has_sql) fail(index, "SQL", "payload mismatch: schema_selection record carries SQL");
    if (!has_schema) fail(index, "extracted_schema", "missing extracted_schema");
    try {
      rec.extracted_schema = schema_from_json(raw["extracted_schema"]);
    } catch (const ValidationError& e) {
      fail(index, "extracted_schema", e.what());
    }
  } else {
    if (has_schema) {
      fail(index, "extracted_schema",
           "payload mismatch: " + std::string(to_string(rec.node_type)) + " record carries extracted_schema");
    }
    if (!has_sql) fail(index, "SQL", "missing SQL");
    if (!raw["SQL"].is_string()) fail(index, "SQL", "SQL must be a string");
    rec.sql = raw["SQL"].get<std::string>();
  }

  rec.token_cost = *read_count(raw, "token_cost", index, true);
  rec.llm_calls = *read_count(raw, "llm_calls", index, true);
  rec.prompt_tokens = read_count(raw, "prompt_tokens", index, false);
  rec.completion_tokens = read_count(raw, "completion_tokens", index, false);
  rec.candidate_index = read_count(raw, "candidate_index", index, false);
  if (rec.prompt_tokens && rec.completion_tokens &&
      *rec.prompt_tokens + *rec.completion_tokens != rec.token_cost) {
    fail(index, "prompt_tokens", "prompt_tokens + completion_tokens must equal token_cost");
  }
  return rec;
}

Json serialize_record(const RunRecord& rec) {
  Json j = Json::object();
  j["node_type"] = to_string(rec.node_type);
  j["question"] = rec.question;
  if (rec.question_id) j["question_id"] = *rec.question_id;
  if (rec.db_id) j["db_id"] = *rec.db_id;
  if (rec.extracted_schema) j["extracted_schema"] = to_json(*rec.extracted_schema);
  if (rec.sql) j["SQL"] = *rec.sql;
  j["token_cost"] = rec.token_cost;
  j["llm_calls"] = rec.llm_calls;
  if (rec.prompt_tokens) j["prompt_tokens"] = *rec.prompt_tokens;
  if (rec.completion_tokens) j["completion_tokens"] = *rec.completion_tokens;
  if (rec.candidate_index) j["candidate_index"] = *rec.candidate_index;
  return j;
}

RunFile validate_run_file(const Json& raw) {
  RunFile out;
  if (!raw.is_array()) {
    out.issues.push_back({0, "<file>", "run file must be a JSON array of records"});
    return out;
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    try {
      out.records.push_back(validate_record(raw[i], i));
    } catch (const RecordError& e) {
      out.issues.push_back(e.issue());
    }
  }
  return out;
}

std::string_view to_string(Difficulty d) {
  switch (d) {
    case Difficulty::kSimple: return "simple";
    case Difficulty::kModerate: return "moderate";
    case Difficulty::kChallenging: return "challenging";
    case Difficulty::kUnlabeled: return "unlabeled";
  }
  return "?";
}

std::optional<Difficulty> parse_difficulty(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "simple") return Difficulty::kSimple;
  if (lower == "moderate") return Difficulty::kModerate;
  if (lower == "challenging") return Difficulty::kChallenging;
  if (lower.empty() || lower == "unlabeled") return Difficulty::kUnlabeled;
  return std::nullopt;
}

std::string_view to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kNoTableOrColumn: return "no_such_table_or_column";
    case ErrorCategory::kNoFunction: return "no_such_function";
    case ErrorCategory::kSyntaxError: return "syntax_error";
    case ErrorCategory::kTimeout: return "timeout";
    case ErrorCategory::kOther: return "other";
  }
  return "?";
}

std::optional<ErrorCategory> parse_error_category(std::string_view text) {
  for (auto c : kAllErrorCategories) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::kCorrect: return "correct";
    case Outcome::kIncorrect: return "incorrect";
    case Outcome::kError: return "error";
  }
  return "?";
}

std::optional<Outcome> parse_outcome(std::string_view text) {
  if (text == "correct") return Outcome::kCorrect;
  if (text == "incorrect") return Outcome::kIncorrect;
  if (text == "error") return Outcome::kError;
  return std::nullopt;
}

std::string describe(const OutcomeLabel& label) {
  if (!label.is_error()) return std::string(to_string(label.outcome));
  return "error(" + std::string(to_string(label.category)) + ")";
}

}  // namespace sqlharness
