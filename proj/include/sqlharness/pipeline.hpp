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

// End-to-end stages over durable intermediate files: validate, postprocess
// (execution and judging), bench (metrics), report and the gold self-test.
//
// Output layout under RunConfig::out:
//   postprocess/gold_audit.json
//   postprocess/<method>/{judgments,schemas,extraction_report}.json
//   bench/metrics.json
//   report/...

#ifndef SQLHARNESS_PIPELINE_HPP_
#define SQLHARNESS_PIPELINE_HPP_

#include <chrono>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqlharness/analysis.hpp"
#include "sqlharness/executor.hpp"
#include "sqlharness/ingest.hpp"
#include "sqlharness/report.hpp"

namespace sqlharness {

// Missing databases, unreadable inputs or unwritable outputs.
class EnvironmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  fs::path dataset;  // dataset manifest
  fs::path runs;     // one run file per method
  fs::path out;
  std::chrono::milliseconds timeout = kDefaultTimeout;
  bool multiset = false;
  std::optional<double> relative_tolerance;
  std::vector<std::size_t> k_list{1, 5, 10, 15, 20};
  std::optional<fs::path> pricing;
  std::string model;  // pricing model label
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  CoefficientKind overlap = CoefficientKind::kJaccard;
  bool overlap_include_errors = false;
  bool timings = false;  // write elapsed times into judgment logs
  Rational prompt_share = Rational(4, 5);

  // Throws ValidationError.
  void validate() const;
  std::string comparison() const { return multiset ? "multiset" : "set"; }
  JudgeOptions judge_options() const;
};

// Relative paths resolve against the config file's directory. Throws
// ValidationError.
RunConfig load_config(const fs::path& path);
RunConfig config_from_json(const Json& doc, const fs::path& base_dir);

struct MethodValidation {
  std::string method;
  std::size_t records = 0;
  std::vector<RecordIssue> issues;
  std::vector<UnmatchedRecord> unmatched;
};

struct ValidationReport {
  std::vector<MethodValidation> methods;
  std::vector<std::string> collisions;

  bool ok() const;
  std::size_t warning_count() const;
};

ValidationReport run_validate(const RunConfig& config);

struct PostprocessSummary {
  std::size_t methods = 0;
  std::size_t judgments = 0;
  std::vector<GoldUnexecutable> excluded;
  std::vector<std::string> warnings;
};

PostprocessSummary run_postprocess(const RunConfig& config);

// Reads only the dataset questions, run files and postprocess outputs.
// Writes bench/metrics.json and returns it.
Json run_bench(const RunConfig& config, std::vector<std::string>* warnings = nullptr);

Manifest run_report(const RunConfig& config, const std::set<ReportFormat>& formats = all_report_formats());

struct SelftestResult {
  std::size_t questions = 0;
  std::vector<GoldUnexecutable> excluded;
  std::vector<Judgment> judgments;
  std::vector<QuestionId> not_correct;
  std::optional<OutcomeRates> rates;
  bool databases_unchanged = true;

  bool passed() const { return not_correct.empty() && databases_unchanged; }
};

SelftestResult run_selftest(const RunConfig& config);

// Judgment log entries.
Json judgment_to_json(const Judgment& j, bool timings);
Judgment judgment_from_json(const Json& j);

}  // namespace sqlharness

#endif  // SQLHARNESS_PIPELINE_HPP_
