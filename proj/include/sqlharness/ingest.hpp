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

// Loading of datasets and run files, and alignment of run records to
// dataset questions.

#ifndef SQLHARNESS_INGEST_HPP_
#define SQLHARNESS_INGEST_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sqlharness/model.hpp"

namespace sqlharness {

namespace fs = std::filesystem;

struct DatasetManifest {
  std::string name;
  fs::path questions_path;
  fs::path databases_root;
  // Harness field -> dataset field. Keys: question_id, db_id, question,
  // gold_sql, difficulty, evidence. A question_id mapping of "@index" uses
  // the array position.
  std::map<std::string, std::string> question_field_map;

  // <databases_root>/<db_id>/<db_id>.sqlite
  fs::path database_path(const std::string& db_id) const;
};

// The BIRD dev layout.
std::map<std::string, std::string> default_field_map();

// Relative paths in the manifest resolve against the manifest's directory.
DatasetManifest load_manifest(const fs::path& manifest_path);

std::vector<QuestionRecord> load_dataset(const DatasetManifest& manifest);

Json read_json_file(const fs::path& path);

struct RunBundle {
  QuestionRecord question;
  std::vector<RunRecord> schema_records;
  std::vector<RunRecord> candidate_records;
  std::vector<RunRecord> revision_records;

  std::size_t record_count() const {
    return schema_records.size() + candidate_records.size() + revision_records.size();
  }
  const std::vector<RunRecord>& records(ModuleKind stage) const;
};

struct UnmatchedRecord {
  std::size_t record_index = 0;
  std::string question;
  std::string reason;
};

struct AlignmentReport {
  std::vector<UnmatchedRecord> unmatched;
  // Dataset questions sharing the same text within one db (text matching
  // against them is ambiguous).
  std::vector<std::string> collisions;
};

struct Alignment {
  std::vector<RunBundle> bundles;  // same order as the input questions
  AlignmentReport report;
};

// Precedence: question_id, then (db_id, exact text), then exact text alone.
// Ambiguous text matches are left unmatched.
Alignment align_runs(const std::vector<RunRecord>& records, const std::vector<QuestionRecord>& questions);

struct MethodRuns {
  std::string method;  // file stem
  fs::path path;
  RunFile file;
};

// Every *.json file of `dir`, ordered by file name.
std::vector<MethodRuns> load_runs_dir(const fs::path& dir);

}  // namespace sqlharness

#endif  // SQLHARNESS_INGEST_HPP_
