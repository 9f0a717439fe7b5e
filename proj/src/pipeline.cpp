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

#include "sqlharness/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include "sqlharness/catalog.hpp"
#include "sqlharness/cost.hpp"
#include "sqlharness/digest.hpp"
#include "sqlharness/metrics.hpp"
#include "sqlharness/schema_extract.hpp"
#include "sqlharness/sql_lexer.hpp"

namespace sqlharness {

namespace {

constexpr ModuleKind kSqlStages[] = {ModuleKind::kCandidateGeneration, ModuleKind::kQueryRevision};

std::string stage_name(ModuleKind k) { return std::string(to_string(k)); }

void write_json(const fs::path& path, const Json& doc) {
  try {
    write_text_file(path, doc.dump(2) + "\n");
  } catch (const ReportError& e) {
    throw EnvironmentError(e.what());
  }
}

Json read_json(const fs::path& path) {
  if (!fs::exists(path)) throw EnvironmentError("missing file " + path.string());
  return read_json_file(path);
}

// One connection per worker and database.
class RunnerPool {
 public:
  QueryRunner& get(const fs::path& db) {
    auto it = runners_.find(db.string());
    if (it == runners_.end()) it = runners_.emplace(db.string(), std::make_unique<QueryRunner>(db)).first;
    return *it->second;
  }

 private:
  std::map<std::string, std::unique_ptr<QueryRunner>> runners_;
};

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t, RunnerPool&)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto body = [&] {
    RunnerPool pool;
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i, pool);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  if (workers == 1) {
    body();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(body);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

struct Dataset {
  DatasetManifest manifest;
  std::vector<QuestionRecord> questions;
  std::map<QuestionId, const QuestionRecord*> by_id;
};

Dataset load_dataset_or_throw(const RunConfig& config) {
  Dataset d;
  if (!fs::exists(config.dataset)) throw EnvironmentError("dataset manifest not found: " + config.dataset.string());
  d.manifest = load_manifest(config.dataset);
  d.questions = load_dataset(d.manifest);
  for (const auto& q : d.questions) d.by_id[q.question_id] = &q;
  return d;
}

void check_databases(const Dataset& d) {
  std::set<std::string> seen;
  for (const auto& q : d.questions) {
    if (!seen.insert(q.db_id).second) continue;
    const auto path = d.manifest.database_path(q.db_id);
    if (!fs::is_regular_file(path)) throw EnvironmentError("database not found: " + path.string());
  }
}

std::vector<MethodRuns> load_methods(const RunConfig& config) {
  if (!fs::is_directory(config.runs)) throw EnvironmentError("runs directory not found: " + config.runs.string());
  return load_runs_dir(config.runs);
}

Json header_base(const RunConfig& config, const Dataset& d) {
  Json h = Json::object();
  h["harness_version"] = std::string(kHarnessVersion);
  h["dataset"] = d.manifest.name;
  h["timeout_ms"] = static_cast<std::int64_t>(config.timeout.count());
  h["comparison"] = config.comparison();
  if (config.relative_tolerance) {
    h["relative_tolerance"] = *config.relative_tolerance;
  } else {
    h["relative_tolerance"] = nullptr;
  }
  return h;
}

// Gold results for every question, executed once.
struct GoldAudit {
  GoldCache cache;
  std::vector<const ExecutionResult*> results;  // dataset order
  std::vector<GoldUnexecutable> excluded;
  std::set<QuestionId> excluded_ids;
};

void run_gold(const RunConfig& config, const Dataset& d, GoldAudit& audit) {
  audit.results.assign(d.questions.size(), nullptr);
  parallel_for(d.questions.size(), config.workers, [&](std::size_t i, RunnerPool& pool) {
    const auto& q = d.questions[i];
    audit.results[i] = &audit.cache.get_or_run(q, pool.get(d.manifest.database_path(q.db_id)), config.timeout);
  });
  for (std::size_t i = 0; i < d.questions.size(); ++i) {
    const auto* r = audit.results[i];
    if (r->ok()) continue;
    const auto& q = d.questions[i];
    audit.excluded.emplace_back(q.question_id, r->timed_out() ? "timeout" : r->message, r->timed_out());
    audit.excluded_ids.insert(q.question_id);
  }
}

Json excluded_json(const std::vector<GoldUnexecutable>& excluded) {
  Json list = Json::array();
  for (const auto& e : excluded) {
    list.push_back({{"question_id", e.question_id}, {"message", e.engine_message}, {"timed_out", e.timed_out}});
  }
  return list;
}

struct JudgeTask {
  std::size_t question = 0;  // dataset index
  ModuleKind stage = ModuleKind::kCandidateGeneration;
  std::uint64_t candidate_index = 0;
  std::optional<std::string> sql;  // nullopt: missing prediction
};

Judgment missing_prediction(const QuestionRecord& q, ModuleKind stage) {
  Judgment j;
  j.question_id = q.question_id;
  j.stage = stage;
  j.candidate_index = 0;
  j.label = OutcomeLabel::error(ErrorCategory::kOther);
  j.detail = "missing prediction";
  return j;
}

bool judgment_less(const Judgment& a, const Judgment& b) {
  return std::tuple(static_cast<int>(a.stage), a.question_id, a.candidate_index) <
         std::tuple(static_cast<int>(b.stage), b.question_id, b.candidate_index);
}

Json extraction_issue_json(const ExtractionResult& r) {
  return {{"unresolved", r.unresolved}, {"ambiguous", r.ambiguous}};
}

}  // namespace

void RunConfig::validate() const {
  if (workers < 1) throw ValidationError("worker count must be at least 1");
  if (k_list.empty()) throw ValidationError("k-list must not be empty");
  for (std::size_t i = 0; i < k_list.size(); ++i) {
    if (k_list[i] == 0) throw ValidationError("k-list values must be positive");
    if (i > 0 && k_list[i] <= k_list[i - 1]) throw ValidationError("k-list must be strictly increasing");
  }
  if (timeout.count() <= 0) throw ValidationError("timeout must be positive");
  if (relative_tolerance && *relative_tolerance < 0) throw ValidationError("relative tolerance must be >= 0");
  if (prompt_share < 0 || prompt_share > 1) throw ValidationError("prompt share must lie in [0, 1]");
}

JudgeOptions RunConfig::judge_options() const {
  JudgeOptions o;
  o.timeout = std::chrono::duration_cast<Duration>(timeout);
  o.compare.multiset = multiset;
  o.compare.relative_tolerance = relative_tolerance;
  return o;
}

RunConfig config_from_json(const Json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  RunConfig c;
  auto path_of = [&](const char* key) -> std::optional<fs::path> {
    if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
    fs::path p = doc.at(key).get<std::string>();
    return p.is_absolute() ? p : base_dir / p;
  };
  try {
    if (auto p = path_of("dataset")) c.dataset = *p;
    if (auto p = path_of("runs")) c.runs = *p;
    if (auto p = path_of("out")) c.out = *p;
    c.pricing = path_of("pricing");
    if (doc.contains("timeout_ms")) c.timeout = std::chrono::milliseconds(doc.at("timeout_ms").get<std::int64_t>());
    if (doc.contains("comparison")) {
      const auto mode = doc.at("comparison").get<std::string>();
      if (mode != "set" && mode != "multiset") throw ValidationError("comparison must be set or multiset");
      c.multiset = mode == "multiset";
    }
    if (doc.contains("relative_tolerance") && !doc.at("relative_tolerance").is_null()) {
      c.relative_tolerance = doc.at("relative_tolerance").get<double>();
    }
    if (doc.contains("k")) c.k_list = doc.at("k").get<std::vector<std::size_t>>();
    if (doc.contains("model")) c.model = doc.at("model").get<std::string>();
    if (doc.contains("workers")) {
      const auto w = doc.at("workers").get<std::int64_t>();
      if (w < 1) throw ValidationError("worker count must be at least 1");
      c.workers = static_cast<std::size_t>(w);
    }
    if (doc.contains("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("overlap")) c.overlap = parse_coefficient_kind(doc.at("overlap").get<std::string>());
    if (doc.contains("overlap_include_errors")) c.overlap_include_errors = doc.at("overlap_include_errors").get<bool>();
    if (doc.contains("timings")) c.timings = doc.at("timings").get<bool>();
    if (doc.contains("prompt_share")) {
      const Json& s = doc.at("prompt_share");
      c.prompt_share = parse_decimal(s.is_string() ? s.get<std::string>() : s.dump());
    }
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw ValidationError("config file not found: " + path.string());
  return config_from_json(read_json_file(path), fs::absolute(path).parent_path());
}

Json judgment_to_json(const Judgment& j, bool timings) {
  Json o = Json::object();
  o["question_id"] = j.question_id;
  o["stage"] = stage_name(j.stage);
  o["candidate_index"] = j.candidate_index;
  o["outcome"] = std::string(to_string(j.label.outcome));
  if (j.label.is_error()) o["category"] = std::string(to_string(j.label.category));
  if (j.detail) o["detail"] = *j.detail;
  if (timings) {
    o["predicted_elapsed_us"] = static_cast<std::int64_t>(j.predicted_elapsed.count());
    o["gold_elapsed_us"] = static_cast<std::int64_t>(j.gold_elapsed.count());
  }
  return o;
}

Judgment judgment_from_json(const Json& o) {
  Judgment j;
  try {
    j.question_id = o.at("question_id").get<QuestionId>();
    auto stage = parse_module_kind(o.at("stage").get<std::string>());
    auto outcome = parse_outcome(o.at("outcome").get<std::string>());
    if (!stage || !outcome) throw ValidationError("bad stage or outcome");
    j.stage = *stage;
    j.candidate_index = o.at("candidate_index").get<std::uint64_t>();
    j.label.outcome = *outcome;
    if (*outcome == Outcome::kError) {
      auto c = parse_error_category(o.at("category").get<std::string>());
      if (!c) throw ValidationError("bad error category");
      j.label.category = *c;
    }
    if (o.contains("detail")) j.detail = o.at("detail").get<std::string>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed judgment: ") + e.what());
  }
  return j;
}

bool ValidationReport::ok() const {
  return std::all_of(methods.begin(), methods.end(), [](const MethodValidation& m) { return m.issues.empty(); });
}

std::size_t ValidationReport::warning_count() const {
  std::size_t n = 0;
  for (const auto& m : methods) n += m.unmatched.size();
  return n;
}

ValidationReport run_validate(const RunConfig& config) {
  const Dataset d = load_dataset_or_throw(config);
  ValidationReport report;
  for (auto& m : load_methods(config)) {
    MethodValidation v;
    v.method = m.method;
    v.records = m.file.records.size();
    v.issues = m.file.issues;
    auto aligned = align_runs(m.file.records, d.questions);
    v.unmatched = std::move(aligned.report.unmatched);
    if (report.collisions.empty()) report.collisions = aligned.report.collisions;
    report.methods.push_back(std::move(v));
  }
  return report;
}

PostprocessSummary run_postprocess(const RunConfig& config) {
  config.validate();
  const Dataset d = load_dataset_or_throw(config);
  check_databases(d);
  auto methods = load_methods(config);
  const fs::path out = config.out / "postprocess";

  GoldAudit audit;
  run_gold(config, d, audit);
  PostprocessSummary summary;
  summary.excluded = audit.excluded;
  summary.methods = methods.size();

  Json audit_doc = {{"header", header_base(config, d)}, {"excluded", excluded_json(audit.excluded)}};
  audit_doc["header"]["questions"] = d.questions.size();
  audit_doc["header"]["excluded_count"] = audit.excluded.size();
  write_json(out / "gold_audit.json", audit_doc);

  // Gold schemas, independent of the method.
  std::map<std::string, Catalog> catalogs;
  for (const auto& q : d.questions) {
    if (!catalogs.count(q.db_id)) catalogs.emplace(q.db_id, catalog_from_database(d.manifest.database_path(q.db_id), true));
  }
  std::vector<std::optional<SchemaSet>> gold_schema(d.questions.size());
  Json gold_issues = Json::array();
  for (std::size_t i = 0; i < d.questions.size(); ++i) {
    const auto& q = d.questions[i];
    if (audit.excluded_ids.count(q.question_id)) continue;
    try {
      auto r = extract_schema(q.gold_sql, catalogs.at(q.db_id));
      gold_schema[i] = r.schema;
      if (!r.unresolved.empty() || !r.ambiguous.empty()) {
        Json e = extraction_issue_json(r);
        e["question_id"] = q.question_id;
        gold_issues.push_back(e);
      }
    } catch (const std::exception& e) {
      gold_issues.push_back({{"question_id", q.question_id}, {"error", e.what()}});
      summary.warnings.push_back("gold schema of question " + std::to_string(q.question_id) + ": " + e.what());
    }
  }

  const JudgeOptions options = config.judge_options();
  for (auto& m : methods) {
    auto aligned = align_runs(m.file.records, d.questions);
    std::vector<JudgeTask> tasks;
    std::vector<Judgment> judgments;
    bool has_stage[3] = {false, false, false};
    for (const auto& b : aligned.bundles) {
      for (auto stage : {ModuleKind::kSchemaSelection, ModuleKind::kCandidateGeneration, ModuleKind::kQueryRevision}) {
        if (!b.records(stage).empty()) has_stage[static_cast<int>(stage)] = true;
      }
    }
    Json schema_rows = Json::array();
    Json prediction_issues = Json::array();
    for (std::size_t i = 0; i < aligned.bundles.size(); ++i) {
      const auto& b = aligned.bundles[i];
      const auto& q = b.question;
      if (audit.excluded_ids.count(q.question_id)) continue;
      Json row = {{"question_id", q.question_id}, {"gold", nullptr}, {"selected", nullptr}};
      if (gold_schema[i]) row["gold"] = to_json(*gold_schema[i]);
      if (!b.schema_records.empty() && b.schema_records.front().extracted_schema) {
        row["selected"] = to_json(*b.schema_records.front().extracted_schema);
      }
      if (has_stage[static_cast<int>(ModuleKind::kSchemaSelection)]) schema_rows.push_back(row);
      for (auto stage : kSqlStages) {
        const auto& records = b.records(stage);
        if (records.empty()) {
          if (has_stage[static_cast<int>(stage)]) judgments.push_back(missing_prediction(q, stage));
          continue;
        }
        for (std::size_t r = 0; r < records.size(); ++r) {
          tasks.push_back({i, stage, records[r].candidate_index.value_or(r), records[r].sql});
        }
      }
      const auto& cg = b.candidate_records;
      if (!cg.empty() && cg.front().sql) {
        try {
          auto r = extract_schema(*cg.front().sql, catalogs.at(q.db_id));
          if (!r.unresolved.empty() || !r.ambiguous.empty()) {
            Json e = extraction_issue_json(r);
            e["question_id"] = q.question_id;
            prediction_issues.push_back(e);
          }
        } catch (const std::exception& e) {
          prediction_issues.push_back({{"question_id", q.question_id}, {"error", e.what()}});
        }
      }
    }

    std::vector<Judgment> results(tasks.size());
    parallel_for(tasks.size(), config.workers, [&](std::size_t t, RunnerPool& pool) {
      const auto& task = tasks[t];
      const auto& q = d.questions[task.question];
      if (!task.sql) {
        results[t] = missing_prediction(q, task.stage);
        results[t].candidate_index = task.candidate_index;
        return;
      }
      results[t] = judge(q, *task.sql, pool.get(d.manifest.database_path(q.db_id)), options, &audit.cache, task.stage,
                         task.candidate_index);
    });
    judgments.insert(judgments.end(), results.begin(), results.end());
    std::stable_sort(judgments.begin(), judgments.end(), judgment_less);
    summary.judgments += judgments.size();

    Json header = header_base(config, d);
    header["method"] = m.method;
    header["questions"] = d.questions.size();
    header["excluded_count"] = audit.excluded.size();
    header["invalid_records"] = m.file.issues.size();
    header["unmatched_records"] = aligned.report.unmatched.size();
    if (!m.file.issues.empty()) {
      summary.warnings.push_back(m.method + ": " + std::to_string(m.file.issues.size()) + " invalid records skipped");
    }
    if (!aligned.report.unmatched.empty()) {
      summary.warnings.push_back(m.method + ": " + std::to_string(aligned.report.unmatched.size()) +
                                 " records match no question");
    }

    Json log = Json::array();
    for (const auto& j : judgments) log.push_back(judgment_to_json(j, config.timings));
    Json excluded_ids = Json::array();
    for (auto id : audit.excluded_ids) excluded_ids.push_back(id);
    const fs::path dir = out / m.method;
    write_json(dir / "judgments.json", {{"header", header}, {"excluded", excluded_ids}, {"judgments", log}});
    write_json(dir / "schemas.json", {{"header", header}, {"questions", schema_rows}});
    write_json(dir / "extraction_report.json",
               {{"header", header}, {"gold", gold_issues}, {"candidate_generation", prediction_issues}});
  }
  return summary;
}

namespace {

// Per-method inputs of the bench stage.
struct MethodData {
  std::string name;
  std::vector<RunBundle> bundles;
  std::map<ModuleKind, std::vector<Judgment>> judgments;  // SQL stages
  std::map<QuestionId, SchemaSet> gold;
  std::map<QuestionId, SchemaSet> selected;
  bool has_schema_stage = false;
};

struct BenchContext {
  const RunConfig& config;
  const Dataset& dataset;
  std::set<QuestionId> scored;  // dataset questions minus exclusions
  std::optional<PricingTable> pricing;
  const PricingModel* pricing_model = nullptr;
  std::vector<std::size_t> ks;
};

Json percent(const MaybeRational& r) { return make_cell(r, CellKind::kPercent); }
Json plain(const MaybeRational& r) { return make_cell(r, CellKind::kPlain); }

Json prf_json(const PrfTriple& t) {
  return {{"precision", percent(t.precision)}, {"recall", percent(t.recall)}, {"f1", percent(t.f1)}};
}

Json selection_json(const std::vector<SelectionScore>& scores) {
  auto agg = aggregate_selection(scores);
  if (!agg) return nullptr;
  return {{"scored", agg->scored},
          {"empty_selections", agg->empty_selections},
          {"macro", prf_json(agg->macro)},
          {"micro", prf_json(agg->micro)}};
}

// Stratum label -> member questions.
using Strata = std::map<std::string, std::set<QuestionId>>;

Strata base_strata(const BenchContext& ctx) {
  Strata s;
  s["all"] = ctx.scored;
  for (auto q : ctx.scored) {
    const auto* rec = ctx.dataset.by_id.at(q);
    s["difficulty=" + std::string(to_string(rec->difficulty))].insert(q);
    s["database=" + rec->db_id].insert(q);
  }
  return s;
}

struct QuestionRecall {
  Rational table;
  MaybeRational column;  // nullopt: gold has no column references
  bool full() const { return table == 1 && (!column || *column == 1); }
};

std::map<QuestionId, QuestionRecall> recalls_of(const MethodData& m, const BenchContext& ctx) {
  std::map<QuestionId, QuestionRecall> out;
  for (auto q : ctx.scored) {
    auto g = m.gold.find(q);
    auto s = m.selected.find(q);
    if (g == m.gold.end() || s == m.selected.end() || g->second.tables().empty()) continue;
    QuestionRecall r;
    r.table = selection_scores(s->second, g->second, SchemaLevel::kTable).recall;
    if (!g->second.columns().empty()) r.column = selection_scores(s->second, g->second, SchemaLevel::kColumn).recall;
    out.emplace(q, r);
  }
  return out;
}

Json schema_stage_json(const MethodData& m, const BenchContext& ctx, const Strata& strata) {
  Json out = Json::object();
  for (const auto& [label, members] : strata) {
    std::vector<SelectionScore> table_scores, column_scores;
    std::size_t missing = 0, column_na = 0;
    for (auto q : members) {
      auto g = m.gold.find(q);
      auto s = m.selected.find(q);
      if (g == m.gold.end() || s == m.selected.end() || g->second.tables().empty()) {
        ++missing;
        continue;
      }
      table_scores.push_back(selection_scores(s->second, g->second, SchemaLevel::kTable));
      if (g->second.columns().empty()) {
        ++column_na;
      } else {
        column_scores.push_back(selection_scores(s->second, g->second, SchemaLevel::kColumn));
      }
    }
    out[label] = {{"questions", table_scores.size()},
                  {"missing", missing},
                  {"column_not_applicable", column_na},
                  {"table", selection_json(table_scores)},
                  {"column", selection_json(column_scores)}};
  }
  (void)ctx;
  return out;
}

CandidateMatrix restrict(const CandidateMatrix& m, const std::set<QuestionId>& members) {
  CandidateMatrix out;
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    if (!members.count(m.question_ids[i])) continue;
    out.question_ids.push_back(m.question_ids[i]);
    out.rows.push_back(m.rows[i]);
  }
  return out;
}

Json pass_at_k_json(const CandidateMatrix& matrix, const std::vector<std::size_t>& ks, Json* short_rows) {
  Json cells = Json::object();
  for (auto k : ks) {
    auto p = pass_at_k(matrix, k);
    cells[std::to_string(k)] = percent(p.rate);
    if (short_rows) (*short_rows)[std::to_string(k)] = p.short_rows;
  }
  return cells;
}

Json rates_json(const OutcomeRates& r) {
  Json breakdown = Json::object();
  for (const auto& [c, n] : r.error_breakdown) breakdown[std::string(to_string(c))] = n;
  return {{"questions", r.questions},
          {"correct", r.correct},
          {"incorrect", r.incorrect},
          {"error", r.error},
          {"correct_rate", percent(r.correct_rate)},
          {"incorrect_rate", percent(r.incorrect_rate)},
          {"error_rate", percent(r.error_rate)},
          {"error_breakdown", breakdown}};
}

// Candidate 0 of every question.
std::vector<Judgment> selected_judgments(const std::vector<Judgment>& all) {
  std::map<QuestionId, const Judgment*> first;
  for (const auto& j : all) {
    auto [it, inserted] = first.emplace(j.question_id, &j);
    if (!inserted && j.candidate_index < it->second->candidate_index) it->second = &j;
  }
  std::vector<Judgment> out;
  for (const auto& [_, j] : first) out.push_back(*j);
  return out;
}

Json sql_stage_json(const std::vector<Judgment>& judgments, const BenchContext& ctx, const Strata& strata) {
  const auto selected = selected_judgments(judgments);
  const auto matrix = candidate_matrix(judgments);
  // Reverse index for the stratify callback.
  std::map<QuestionId, std::vector<std::string>> labels_of;
  for (const auto& [label, members] : strata) {
    for (auto q : members) labels_of[q].push_back(label);
  }
  Json out = Json::object();
  for (const auto& [label, members] : strata) {
    std::vector<Judgment> subset;
    for (const auto& j : selected) {
      if (members.count(j.question_id)) subset.push_back(j);
    }
    if (subset.empty()) continue;
    const std::string want = label;
    auto rates = stratify(std::span<const Judgment>(subset), StratumDimension::kDifficulty,
                          [&](QuestionId) -> std::optional<std::string> { return want; });
    Json cell = rates_json(rates.begin()->second);
    Json short_rows = Json::object();
    cell["pass_at_k"] = pass_at_k_json(restrict(matrix, members), ctx.ks, &short_rows);
    cell["short_rows"] = short_rows;
    out[label] = cell;
  }
  return out;
}

Json efficiency_json(const MethodData& m, ModuleKind stage, const BenchContext& ctx) {
  std::set<QuestionId> excluded;
  for (const auto& b : m.bundles) {
    if (!ctx.scored.count(b.question.question_id)) excluded.insert(b.question.question_id);
  }
  auto e = efficiency_summary(m.bundles, stage, excluded);
  return {{"questions", e.questions},
          {"mean_tokens", plain(e.mean_tokens)},
          {"mean_llm_calls", plain(e.mean_llm_calls)},
          {"total_tokens", e.total_tokens},
          {"total_llm_calls", e.total_llm_calls},
          {"missing", e.missing}};
}

Json cost_json(const MethodData& m, ModuleKind stage, const BenchContext& ctx) {
  if (!ctx.pricing_model) return nullptr;
  Rational total;
  bool estimated = false;
  std::size_t questions = 0;
  for (const auto& b : m.bundles) {
    if (!ctx.scored.count(b.question.question_id)) continue;
    ++questions;
    for (const auto& r : b.records(stage)) {
      UsageStats u{r.token_cost, r.llm_calls, r.prompt_tokens, r.completion_tokens};
      auto c = estimate_cost(u, *ctx.pricing_model, ctx.config.prompt_share);
      total += c.amount;
      estimated = estimated || c.estimated_split;
    }
  }
  MaybeRational mean;
  if (questions > 0) mean = total / Rational(static_cast<long long>(questions));
  return {{"model", ctx.pricing_model->name},
          {"currency", ctx.pricing->currency},
          {"total", make_cell(total, CellKind::kCost)},
          {"mean_per_question", make_cell(mean, CellKind::kCost)},
          {"estimated_split", estimated}};
}

std::map<QuestionId, OutcomeLabel> label_map(const std::vector<Judgment>& judgments) {
  std::map<QuestionId, OutcomeLabel> out;
  for (const auto& j : selected_judgments(judgments)) out.emplace(j.question_id, j.label);
  return out;
}

Json revision_json(const MethodData& m) {
  RevisionLedger ledger(label_map(m.judgments.at(ModuleKind::kCandidateGeneration)),
                        label_map(m.judgments.at(ModuleKind::kQueryRevision)));
  auto r = revision_metrics(ledger);
  return {{"ci", percent(r.ci)},         {"i2c", percent(r.i2c)},        {"e2c", percent(r.e2c)},
          {"c2i", percent(r.c2i)},       {"c2e", percent(r.c2e)},        {"cr_pre", percent(r.cr_pre)},
          {"cr_post", percent(r.cr_post)}, {"questions", ledger.questions()}};
}

Json method_json(const MethodData& m, const BenchContext& ctx) {
  Json out = Json::object();
  out["questions"] = ctx.scored.size();
  Json stages = Json::object();
  const Strata strata = base_strata(ctx);
  const auto recalls = m.has_schema_stage ? recalls_of(m, ctx) : std::map<QuestionId, QuestionRecall>{};

  if (m.has_schema_stage) {
    stages["schema_selection"] = {{"strata", schema_stage_json(m, ctx, strata)},
                                  {"efficiency", efficiency_json(m, ModuleKind::kSchemaSelection, ctx)},
                                  {"cost", cost_json(m, ModuleKind::kSchemaSelection, ctx)}};
  }
  Strata sql_strata = strata;
  for (const auto& [q, r] : recalls) sql_strata[std::string(r.full() ? kRecallFull : kRecallPartial)].insert(q);
  for (auto stage : kSqlStages) {
    auto it = m.judgments.find(stage);
    if (it == m.judgments.end() || it->second.empty()) continue;
    stages[stage_name(stage)] = {{"strata", sql_stage_json(it->second, ctx, sql_strata)},
                                 {"efficiency", efficiency_json(m, stage, ctx)},
                                 {"cost", cost_json(m, stage, ctx)}};
  }
  out["stages"] = stages;

  const bool has_cg = m.judgments.count(ModuleKind::kCandidateGeneration) > 0;
  const bool has_qr = m.judgments.count(ModuleKind::kQueryRevision) > 0;
  if (has_cg && has_qr) out["revision"] = revision_json(m);

  if (m.has_schema_stage && (has_cg || has_qr)) {
    std::map<QuestionId, OutcomeLabel> cg, qr;
    if (has_cg) cg = label_map(m.judgments.at(ModuleKind::kCandidateGeneration));
    if (has_qr) qr = label_map(m.judgments.at(ModuleKind::kQueryRevision));
    auto find_label = [](const std::map<QuestionId, OutcomeLabel>& labels, QuestionId q) -> std::optional<OutcomeLabel> {
      auto it = labels.find(q);
      if (it == labels.end()) return std::nullopt;
      return it->second;
    };
    std::vector<RecallRow> rows;
    std::vector<RecallSample> table_samples, column_samples;
    for (auto q : ctx.scored) {
      RecallRow row{q, std::nullopt, find_label(cg, q), find_label(qr, q)};
      if (auto r = recalls.find(q); r != recalls.end()) {
        row.full_recall = r->second.full();
        table_samples.push_back({q, r->second.table, row.candidate, row.revision});
        if (r->second.column) column_samples.push_back({q, *r->second.column, row.candidate, row.revision});
      }
      rows.push_back(row);
    }
    auto conditioned = recall_conditioned_rates(rows);
    Json bands = Json::object();
    for (const auto& [band, b] : conditioned.bands) {
      Json cell = {{"questions", b.questions},
                   {"candidate_generation", percent(b.candidate_correct_rate)},
                   {"query_revision", percent(b.revision_correct_rate)}};
      if (has_cg) {
        std::set<QuestionId> members;
        for (const auto& [q, r] : recalls) {
          if (std::string(r.full() ? kRecallFull : kRecallPartial) == band) members.insert(q);
        }
        auto matrix = restrict(candidate_matrix(m.judgments.at(ModuleKind::kCandidateGeneration)), members);
        if (!matrix.rows.empty()) cell["pass_at_k"] = pass_at_k_json(matrix, ctx.ks, nullptr);
      }
      bands[band] = cell;
    }
    out["recall_conditioned"] = {{"excluded", conditioned.excluded}, {"bands", bands}};
    auto conditioned_json = [](const ConditionedRecall& c) {
      return Json{{"candidate_correct", percent(c.candidate_correct)},
                  {"candidate_wrong", percent(c.candidate_wrong)},
                  {"revision_correct", percent(c.revision_correct)},
                  {"revision_wrong", percent(c.revision_wrong)}};
    };
    out["outcome_conditioned_recall"] = {{"table", conditioned_json(outcome_conditioned_recall(table_samples))},
                                         {"column", conditioned_json(outcome_conditioned_recall(column_samples))}};
  }
  return out;
}

Json cross_method_json(const std::vector<MethodData>& methods, const BenchContext& ctx) {
  Json out = Json::object();
  Json overlap = Json::object();
  for (auto stage : kSqlStages) {
    std::vector<MethodSet> sets;
    for (const auto& m : methods) {
      auto it = m.judgments.find(stage);
      if (it == m.judgments.end()) continue;
      MethodSet s{m.name, {}, {}};
      for (const auto& [q, l] : label_map(it->second)) {
        if (!ctx.scored.count(q)) continue;
        s.universe.insert(q);
        if (l.is_incorrect() || (ctx.config.overlap_include_errors && l.is_error())) s.members.insert(q);
      }
      sets.push_back(std::move(s));
    }
    if (sets.size() < 2) continue;
    auto matrix = incorrect_overlap(sets, ctx.config.overlap);
    Json rows = Json::array();
    for (const auto& row : matrix.coefficients) {
      Json cells = Json::array();
      for (const auto& c : row) cells.push_back(plain(c));
      rows.push_back(cells);
    }
    overlap[stage_name(stage)] = {{"kind", std::string(to_string(matrix.kind))},
                                  {"includes_errors", ctx.config.overlap_include_errors},
                                  {"methods", matrix.methods},
                                  {"matrix", rows}};
  }
  out["incorrect_overlap"] = overlap;

  std::vector<MethodSet> solved;
  Json stage_used = Json::object();
  for (const auto& m : methods) {
    const ModuleKind final_stage =
        m.judgments.count(ModuleKind::kQueryRevision) ? ModuleKind::kQueryRevision : ModuleKind::kCandidateGeneration;
    auto it = m.judgments.find(final_stage);
    if (it == m.judgments.end()) continue;
    MethodSet s{m.name, {}, {}};
    for (const auto& [q, l] : label_map(it->second)) {
      if (ctx.scored.count(q) && l.is_correct()) s.members.insert(q);
    }
    stage_used[m.name] = stage_name(final_stage);
    solved.push_back(std::move(s));
  }
  if (!solved.empty()) {
    std::vector<QuestionRecord> questions;
    for (auto q : ctx.scored) questions.push_back(*ctx.dataset.by_id.at(q));
    auto h = solvability_histogram(solved, questions);
    Json bins = Json::object();
    bins["all"] = h.total;
    for (const auto& [difficulty, b] : h.by_difficulty) bins[std::string(to_string(difficulty))] = b;
    Json names = Json::array();
    for (const auto& s : solved) names.push_back(s.method);
    out["solvability"] = {{"methods", names}, {"stages", stage_used}, {"bins", bins}, {"unsolved", h.unsolved}};
  }
  return out;
}

}  // namespace

Json run_bench(const RunConfig& config, std::vector<std::string>* warnings) {
  config.validate();
  std::vector<std::string> local_warnings;
  if (!warnings) warnings = &local_warnings;
  const Dataset d = load_dataset_or_throw(config);
  const fs::path post = config.out / "postprocess";
  const Json audit = read_json(post / "gold_audit.json");
  std::set<QuestionId> excluded;
  for (const auto& e : audit.at("excluded")) excluded.insert(e.at("question_id").get<QuestionId>());

  BenchContext ctx{config, d, {}, std::nullopt, nullptr, config.k_list};
  for (const auto& q : d.questions) {
    if (!excluded.count(q.question_id)) ctx.scored.insert(q.question_id);
  }
  if (ctx.scored.empty()) throw ValidationError("no scorable questions (every gold query is excluded)");

  std::string pricing_status = "none";
  if (config.pricing) {
    if (!fs::exists(*config.pricing)) {
      pricing_status = "missing";
      warnings->push_back("pricing file not found: " + config.pricing->string() + "; costs omitted");
    } else {
      ctx.pricing = load_pricing(*config.pricing);
      auto it = ctx.pricing->models.find(config.model);
      if (it == ctx.pricing->models.end()) {
        pricing_status = "unknown_model";
        warnings->push_back("no pricing for model '" + config.model + "'; costs omitted");
      } else {
        pricing_status = "ok";
        ctx.pricing_model = &it->second;
      }
    }
  }

  std::vector<MethodData> methods;
  for (auto& runs : load_methods(config)) {
    MethodData m;
    m.name = runs.method;
    m.bundles = align_runs(runs.file.records, d.questions).bundles;
    const Json log = read_json(post / m.name / "judgments.json");
    for (const auto& j : log.at("judgments")) {
      Judgment judgment = judgment_from_json(j);
      if (ctx.scored.count(judgment.question_id)) m.judgments[judgment.stage].push_back(judgment);
    }
    const Json schemas = read_json(post / m.name / "schemas.json");
    for (const auto& row : schemas.at("questions")) {
      const auto q = row.at("question_id").get<QuestionId>();
      if (!row.at("gold").is_null()) m.gold.emplace(q, schema_from_json(row.at("gold")));
      if (!row.at("selected").is_null()) m.selected.emplace(q, schema_from_json(row.at("selected")));
    }
    for (const auto& b : m.bundles) m.has_schema_stage = m.has_schema_stage || !b.schema_records.empty();
    methods.push_back(std::move(m));
  }

  Json header = Json::object();
  header["harness_version"] = std::string(kHarnessVersion);
  header["dataset"] = d.manifest.name;
  header["model"] = config.model;
  header["timeout_ms"] = audit.at("header").at("timeout_ms");
  header["comparison"] = audit.at("header").at("comparison");
  header["relative_tolerance"] = audit.at("header").at("relative_tolerance");
  header["questions"] = d.questions.size();
  header["scored_questions"] = ctx.scored.size();
  header["excluded_count"] = excluded.size();
  header["excluded"] = excluded;
  header["k_list"] = config.k_list;
  header["overlap"] = std::string(to_string(config.overlap));
  header["overlap_includes_errors"] = config.overlap_include_errors;
  header["prompt_share"] = to_string(config.prompt_share);
  header["pricing"] = pricing_status;
  header["currency"] = ctx.pricing ? Json(ctx.pricing->currency) : Json(nullptr);

  Json doc = Json::object();
  doc["schema_version"] = kMetricsSchemaVersion;
  doc["header"] = header;
  Json methods_json = Json::object();
  for (const auto& m : methods) methods_json[m.name] = method_json(m, ctx);
  doc["methods"] = methods_json;
  doc["cross_method"] = cross_method_json(methods, ctx);
  write_json(config.out / "bench" / "metrics.json", doc);
  return doc;
}

Manifest run_report(const RunConfig& config, const std::set<ReportFormat>& formats) {
  const Json metrics = read_json(config.out / "bench" / "metrics.json");
  try {
    return emit(metrics, formats, config.out / "report");
  } catch (const ReportError& e) {
    throw EnvironmentError(e.what());
  }
}

SelftestResult run_selftest(const RunConfig& config) {
  config.validate();
  const Dataset d = load_dataset_or_throw(config);
  check_databases(d);
  std::map<std::string, std::string> before;
  for (const auto& q : d.questions) {
    const auto path = d.manifest.database_path(q.db_id).string();
    if (!before.count(path)) before[path] = sha256_file(path);
  }

  SelftestResult result;
  result.questions = d.questions.size();
  GoldAudit audit;
  run_gold(config, d, audit);
  result.excluded = audit.excluded;

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < d.questions.size(); ++i) {
    if (!audit.excluded_ids.count(d.questions[i].question_id)) todo.push_back(i);
  }
  const JudgeOptions options = config.judge_options();
  std::vector<Judgment> judgments(todo.size());
  parallel_for(todo.size(), config.workers, [&](std::size_t t, RunnerPool& pool) {
    const auto& q = d.questions[todo[t]];
    judgments[t] = judge(q, q.gold_sql, pool.get(d.manifest.database_path(q.db_id)), options, &audit.cache);
  });
  for (const auto& j : judgments) {
    if (!j.label.is_correct()) result.not_correct.push_back(j.question_id);
  }
  if (!judgments.empty()) result.rates = outcome_rates(std::span<const Judgment>(judgments));
  result.judgments = std::move(judgments);
  for (const auto& [path, digest] : before) {
    if (sha256_file(path) != digest) result.databases_unchanged = false;
  }
  return result;
}

}  // namespace sqlharness
