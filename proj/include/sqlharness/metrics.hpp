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

// Module-level metrics: schema-selection precision/recall/F1, correct /
// incorrect / error rates, Pass@k, revision transition rates and efficiency.
// All values are exact rationals.

#ifndef SQLHARNESS_METRICS_HPP_
#define SQLHARNESS_METRICS_HPP_

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "sqlharness/executor.hpp"
#include "sqlharness/ingest.hpp"
#include "sqlharness/model.hpp"
#include "sqlharness/rational.hpp"

namespace sqlharness {

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SchemaLevel { kTable, kColumn };
std::string_view to_string(SchemaLevel level);

struct SelectionScore {
  SchemaLevel level = SchemaLevel::kTable;
  Rational precision;
  Rational recall;
  Rational f1;
  std::size_t gold_size = 0;      // |R|
  std::size_t selected_size = 0;  // |S|
  std::size_t overlap = 0;        // |R ∩ S|
  bool empty_selection = false;   // |S| = 0, precision reported as 0
};

// Table level compares table-name sets; column level compares (table,
// column) pairs. Throws MetricError when gold is empty at `level`.
SelectionScore selection_scores(const SchemaSet& selected, const SchemaSet& gold, SchemaLevel level);

struct PrfTriple {
  Rational precision;
  Rational recall;
  Rational f1;
};

struct SelectionAggregate {
  PrfTriple macro;  // mean of per-question scores
  PrfTriple micro;  // from summed counts
  std::size_t scored = 0;
  std::size_t empty_selections = 0;
};

// nullopt when no score is given.
std::optional<SelectionAggregate> aggregate_selection(std::span<const SelectionScore> scores);

struct OutcomeRates {
  Rational correct_rate;
  Rational incorrect_rate;
  Rational error_rate;
  std::size_t correct = 0;
  std::size_t incorrect = 0;
  std::size_t error = 0;
  std::size_t questions = 0;
  std::map<ErrorCategory, std::size_t> error_breakdown;  // all five categories present
};

// One label per question. Throws MetricError on empty input.
OutcomeRates outcome_rates(std::span<const OutcomeLabel> labels);
// Throws MetricError on empty input or a repeated question id.
OutcomeRates outcome_rates(std::span<const Judgment> judgments);

// Per-question candidate outcomes, ordered by candidate index.
struct CandidateMatrix {
  std::vector<QuestionId> question_ids;
  std::vector<std::vector<OutcomeLabel>> rows;

  std::size_t size() const { return rows.size(); }
};

// Groups judgments of one stage by question; candidates sorted by index.
CandidateMatrix candidate_matrix(std::span<const Judgment> judgments);

struct PassAtK {
  Rational rate;
  std::size_t short_rows = 0;  // questions with fewer than k candidates
};

// Throws MetricError for k = 0 or an empty matrix.
PassAtK pass_at_k(const CandidateMatrix& matrix, std::size_t k);

class RevisionLedger {
 public:
  // Throws MetricError unless both maps cover the same questions.
  RevisionLedger(std::map<QuestionId, OutcomeLabel> pre, std::map<QuestionId, OutcomeLabel> post);

  const std::set<QuestionId>& c_pre() const { return c_pre_; }
  const std::set<QuestionId>& i_pre() const { return i_pre_; }
  const std::set<QuestionId>& e_pre() const { return e_pre_; }
  const std::set<QuestionId>& c_post() const { return c_post_; }
  const std::set<QuestionId>& i_post() const { return i_post_; }
  const std::set<QuestionId>& e_post() const { return e_post_; }
  std::size_t questions() const { return pre_.size(); }
  Rational cr_pre() const;
  Rational cr_post() const;

 private:
  std::map<QuestionId, OutcomeLabel> pre_;
  std::map<QuestionId, OutcomeLabel> post_;
  std::set<QuestionId> c_pre_, i_pre_, e_pre_, c_post_, i_post_, e_post_;
};

// nullopt marks a zero denominator (not applicable, distinct from 0).
struct RevisionMetrics {
  MaybeRational ci;
  MaybeRational i2c;
  MaybeRational e2c;
  MaybeRational c2i;
  MaybeRational c2e;
  Rational cr_pre;
  Rational cr_post;
};

RevisionMetrics revision_metrics(const RevisionLedger& ledger);

struct EfficiencySummary {
  Rational mean_tokens;
  Rational mean_llm_calls;
  std::uint64_t total_tokens = 0;
  std::uint64_t total_llm_calls = 0;
  std::size_t questions = 0;
  std::vector<QuestionId> missing;  // questions with no record of the stage
};

// Sums every record of `stage` per question, then averages over the bundles
// whose question is not in `excluded`.
EfficiencySummary efficiency_summary(std::span<const RunBundle> bundles, ModuleKind stage,
                                     const std::set<QuestionId>& excluded = {});

}  // namespace sqlharness

#endif  // SQLHARNESS_METRICS_HPP_
