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

#include "sqlharness/ingest.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <unordered_map>

namespace sqlharness {

fs::path DatasetManifest::database_path(const std::string& db_id) const {
  return databases_root / db_id / (db_id + ".sqlite");
}

std::map<std::string, std::string> default_field_map() {
  return {{"question_id", "question_id"}, {"db_id", "db_id"},           {"question", "question"},
          {"gold_sql", "SQL"},            {"difficulty", "difficulty"}, {"evidence", "evidence"}};
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

DatasetManifest load_manifest(const fs::path& manifest_path) {
  Json j = read_json_file(manifest_path);
  const fs::path base = manifest_path.parent_path();
  auto resolve = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string()) {
      throw ValidationError("manifest " + manifest_path.string() + " lacks '" + key + "'");
    }
    fs::path p = j[key].get<std::string>();
    return p.is_absolute() ? p : base / p;
  };
  DatasetManifest m;
  m.name = j.value("name", manifest_path.stem().string());
  m.questions_path = resolve("questions_path");
  m.databases_root = resolve("databases_root");
  m.question_field_map = default_field_map();
  if (j.contains("question_field_map")) {
    for (const auto& [k, v] : j["question_field_map"].items()) m.question_field_map[k] = v.get<std::string>();
  }
  for (const char* required : {"question_id", "db_id", "question", "gold_sql"}) {
    if (!m.question_field_map.count(required)) {
      throw ValidationError(std::string("question_field_map lacks '") + required + "'");
    }
  }
  if (!fs::exists(m.questions_path)) throw ValidationError("questions file not found: " + m.questions_path.string());
  if (!fs::is_directory(m.databases_root)) {
    throw ValidationError("databases root not found: " + m.databases_root.string());
  }
  return m;
}

std::vector<QuestionRecord> load_dataset(const DatasetManifest& manifest) {
  Json j = read_json_file(manifest.questions_path);
  if (!j.is_array()) throw ValidationError(manifest.questions_path.string() + ": expected a JSON array");
  const auto& fm = manifest.question_field_map;
  auto field = [&](const Json& row, std::size_t i, const std::string& key) -> const Json& {
    const std::string& name = fm.at(key);
    if (!row.contains(name)) {
      throw ValidationError("question " + std::to_string(i) + ": missing field '" + name + "'");
    }
    return row[name];
  };

  std::vector<QuestionRecord> out;
  std::set<QuestionId> seen;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& row = j[i];
    QuestionRecord q;
    if (fm.at("question_id") == "@index") {
      q.question_id = static_cast<QuestionId>(i);
    } else {
      q.question_id = field(row, i, "question_id").get<QuestionId>();
    }
    q.db_id = field(row, i, "db_id").get<std::string>();
    q.question = field(row, i, "question").get<std::string>();
    q.gold_sql = field(row, i, "gold_sql").get<std::string>();
    if (q.gold_sql.empty()) throw ValidationError("question " + std::to_string(q.question_id) + ": empty gold SQL");
    if (auto it = fm.find("difficulty"); it != fm.end() && row.contains(it->second)) {
      auto d = parse_difficulty(row[it->second].get<std::string>());
      if (!d) {
        throw ValidationError("question " + std::to_string(q.question_id) + ": unknown difficulty '" +
                              row[it->second].get<std::string>() + "'");
      }
      q.difficulty = *d;
    }
    if (auto it = fm.find("evidence"); it != fm.end() && row.contains(it->second) && row[it->second].is_string()) {
      q.evidence = row[it->second].get<std::string>();
    }
    if (!seen.insert(q.question_id).second) {
      throw ValidationError("duplicate question_id " + std::to_string(q.question_id));
    }
    out.push_back(std::move(q));
  }
  return out;
}

const std::vector<RunRecord>& RunBundle::records(ModuleKind stage) const {
  switch (stage) {
    case ModuleKind::kSchemaSelection: return schema_records;
    case ModuleKind::kCandidateGeneration: return candidate_records;
    case ModuleKind::kQueryRevision: return revision_records;
  }
  return schema_records;
}

Alignment align_runs(const std::vector<RunRecord>& records, const std::vector<QuestionRecord>& questions) {
  Alignment out;
  out.bundles.reserve(questions.size());
  std::unordered_map<QuestionId, std::size_t> by_id;
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> by_db_text;
  std::map<std::string, std::vector<std::size_t>> by_text;
  for (std::size_t i = 0; i < questions.size(); ++i) {
    out.bundles.push_back(RunBundle{questions[i], {}, {}, {}});
    by_id.emplace(questions[i].question_id, i);
    by_db_text[{questions[i].db_id, questions[i].question}].push_back(i);
    by_text[questions[i].question].push_back(i);
  }
  for (const auto& [key, idx] : by_db_text) {
    if (idx.size() > 1) out.report.collisions.push_back(key.first + ": " + key.second);
  }

  // Candidate ordering key: candidate_index when present, else the position
  // among that question's records of the same stage.
  struct Pending {
    std::uint64_t order;
    std::size_t file_pos;
    const RunRecord* rec;
  };
  std::vector<std::array<std::vector<Pending>, 3>> pending(questions.size());

  for (std::size_t r = 0; r < records.size(); ++r) {
    const RunRecord& rec = records[r];
    std::optional<std::size_t> target;
    std::string reason;
    if (rec.question_id) {
      if (auto it = by_id.find(*rec.question_id); it != by_id.end()) {
        target = it->second;
      } else {
        reason = "unknown question_id " + std::to_string(*rec.question_id);
      }
    } else if (rec.db_id) {
      auto it = by_db_text.find({*rec.db_id, rec.question});
      if (it == by_db_text.end()) {
        reason = "no question with this text in db '" + *rec.db_id + "'";
      } else if (it->second.size() > 1) {
        reason = "ambiguous question text in db '" + *rec.db_id + "'";
      } else {
        target = it->second.front();
      }
    } else {
      auto it = by_text.find(rec.question);
      if (it == by_text.end()) {
        reason = "no question with this text";
      } else if (it->second.size() > 1) {
        reason = "ambiguous question text";
      } else {
        target = it->second.front();
      }
    }
    if (!target) {
      out.report.unmatched.push_back({r, rec.question, reason});
      continue;
    }
    auto& list = pending[*target][static_cast<std::size_t>(rec.node_type)];
    list.push_back({rec.candidate_index.value_or(list.size()), r, &rec});
  }

  for (std::size_t q = 0; q < questions.size(); ++q) {
    for (std::size_t s = 0; s < 3; ++s) {
      auto& list = pending[q][s];
      std::stable_sort(list.begin(), list.end(), [](const Pending& a, const Pending& b) {
        return a.order != b.order ? a.order < b.order : a.file_pos < b.file_pos;
      });
      auto& dest = s == 0 ? out.bundles[q].schema_records
                          : (s == 1 ? out.bundles[q].candidate_records : out.bundles[q].revision_records);
      for (const auto& p : list) dest.push_back(*p.rec);
    }
  }
  return out;
}

std::vector<MethodRuns> load_runs_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ValidationError("runs directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<MethodRuns> out;
  for (const auto& f : files) {
    MethodRuns m;
    m.method = f.stem().string();
    m.path = f;
    try {
      m.file = validate_run_file(read_json_file(f));
    } catch (const ValidationError& e) {
      m.file.issues.push_back({0, "<file>", e.what()});
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace sqlharness
