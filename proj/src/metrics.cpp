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

#include "sqlharness/metrics.hpp"

#include <algorithm>

namespace sqlharness {

namespace {

Rational f1_of(const Rational& p, const Rational& r) {
  if (p + r == 0) return Rational(0);
  return Rational(2) * p * r / (p + r);
}

template <typename T>
std::size_t intersection_size(const std::set<T>& a, const std::set<T>& b) {
  std::size_t n = 0;
  for (const auto& x : a) n += b.count(x);
  return n;
}

template <typename T>
SelectionScore score_sets(const std::set<T>& selected, const std::set<T>& gold, SchemaLevel level) {
  if (gold.empty()) throw MetricError("gold schema is empty at " + std::string(to_string(level)) + " level");
  SelectionScore s;
  s.level = level;
  s.gold_size = gold.size();
  s.selected_size = selected.size();
  s.overlap = intersection_size(selected, gold);
  s.empty_selection = selected.empty();
  s.precision = s.empty_selection ? Rational(0) : ratio(s.overlap, s.selected_size);
  s.recall = ratio(s.overlap, s.gold_size);
  s.f1 = f1_of(s.precision, s.recall);
  return s;
}

}  // namespace

std::string_view to_string(SchemaLevel level) { return level == SchemaLevel::kTable ? "table" : "column"; }

SelectionScore selection_scores(const SchemaSet& selected, const SchemaSet& gold, SchemaLevel level) {
  if (level == SchemaLevel::kTable) return score_sets(selected.tables(), gold.tables(), level);
  return score_sets(selected.columns(), gold.columns(), level);
}

std::optional<SelectionAggregate> aggregate_selection(std::span<const SelectionScore> scores) {
  if (scores.empty()) return std::nullopt;
  SelectionAggregate agg;
  Rational sp, sr, sf;
  std::size_t overlap = 0, selected = 0, gold = 0;
  for (const auto& s : scores) {
    sp += s.precision;
    sr += s.recall;
    sf += s.f1;
    overlap += s.overlap;
    selected += s.selected_size;
    gold += s.gold_size;
    if (s.empty_selection) ++agg.empty_selections;
  }
  const Rational n(static_cast<long long>(scores.size()));
  agg.scored = scores.size();
  agg.macro = {sp / n, sr / n, sf / n};
  agg.micro.precision = selected == 0 ? Rational(0) : ratio(overlap, selected);
  agg.micro.recall = ratio(overlap, gold);
  agg.micro.f1 = f1_of(agg.micro.precision, agg.micro.recall);
  return agg;
}

OutcomeRates outcome_rates(std::span<const OutcomeLabel> labels) {
  if (labels.empty()) throw MetricError("outcome rates of an empty question set are undefined");
  OutcomeRates r;
  for (auto c : kAllErrorCategories) r.error_breakdown[c] = 0;
  for (const auto& l : labels) {
    switch (l.outcome) {
      case Outcome::kCorrect: ++r.correct; break;
      case Outcome::kIncorrect: ++r.incorrect; break;
      case Outcome::kError:
        ++r.error;
        ++r.error_breakdown[l.category];
        break;
    }
  }
  r.questions = labels.size();
  const auto q = static_cast<std::int64_t>(r.questions);
  r.correct_rate = ratio(static_cast<std::int64_t>(r.correct), q);
  r.incorrect_rate = ratio(static_cast<std::int64_t>(r.incorrect), q);
  r.error_rate = ratio(static_cast<std::int64_t>(r.error), q);
  return r;
}

OutcomeRates outcome_rates(std::span<const Judgment> judgments) {
  std::set<QuestionId> seen;
  std::vector<OutcomeLabel> labels;
  labels.reserve(judgments.size());
  for (const auto& j : judgments) {
    if (!seen.insert(j.question_id).second) {
      throw MetricError("more than one judgment for question " + std::to_string(j.question_id));
    }
    labels.push_back(j.label);
  }
  return outcome_rates(std::span<const OutcomeLabel>(labels));
}

CandidateMatrix candidate_matrix(std::span<const Judgment> judgments) {
  std::map<QuestionId, std::vector<const Judgment*>> grouped;
  for (const auto& j : judgments) grouped[j.question_id].push_back(&j);
  CandidateMatrix m;
  for (auto& [qid, list] : grouped) {
    std::stable_sort(list.begin(), list.end(),
                     [](const Judgment* a, const Judgment* b) { return a->candidate_index < b->candidate_index; });
    std::vector<OutcomeLabel> row;
    for (const auto* j : list) row.push_back(j->label);
    m.question_ids.push_back(qid);
    m.rows.push_back(std::move(row));
  }
  return m;
}

PassAtK pass_at_k(const CandidateMatrix& matrix, std::size_t k) {
  if (k == 0) throw MetricError("Pass@k requires k >= 1");
  if (matrix.rows.empty()) throw MetricError("Pass@k of an empty question set is undefined");
  PassAtK out;
  std::size_t hits = 0;
  for (const auto& row : matrix.rows) {
    if (row.size() < k) ++out.short_rows;
    const std::size_t limit = std::min(k, row.size());
    if (std::any_of(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(limit),
                    [](const OutcomeLabel& l) { return l.is_correct(); })) {
      ++hits;
    }
  }
  out.rate = ratio(static_cast<std::int64_t>(hits), static_cast<std::int64_t>(matrix.rows.size()));
  return out;
}

RevisionLedger::RevisionLedger(std::map<QuestionId, OutcomeLabel> pre, std::map<QuestionId, OutcomeLabel> post)
    : pre_(std::move(pre)), post_(std::move(post)) {
  std::set<QuestionId> only;
  for (const auto& [q, _] : pre_) {
    if (!post_.count(q)) only.insert(q);
  }
  for (const auto& [q, _] : post_) {
    if (!pre_.count(q)) only.insert(q);
  }
  if (!only.empty()) {
    std::string ids;
    for (auto q : only) ids += (ids.empty() ? "" : ", ") + std::to_string(q);
    throw MetricError("pre/post revision labels cover different questions: " + ids);
  }
  auto split = [](const std::map<QuestionId, OutcomeLabel>& labels, std::set<QuestionId>& c, std::set<QuestionId>& i,
                  std::set<QuestionId>& e) {
    for (const auto& [q, l] : labels) {
      (l.is_correct() ? c : l.is_incorrect() ? i : e).insert(q);
    }
  };
  split(pre_, c_pre_, i_pre_, e_pre_);
  split(post_, c_post_, i_post_, e_post_);
}

Rational RevisionLedger::cr_pre() const {
  if (pre_.empty()) return Rational(0);
  return ratio(static_cast<std::int64_t>(c_pre_.size()), static_cast<std::int64_t>(pre_.size()));
}

Rational RevisionLedger::cr_post() const {
  if (post_.empty()) return Rational(0);
  return ratio(static_cast<std::int64_t>(c_post_.size()), static_cast<std::int64_t>(post_.size()));
}

RevisionMetrics revision_metrics(const RevisionLedger& ledger) {
  RevisionMetrics m;
  m.cr_pre = ledger.cr_pre();
  m.cr_post = ledger.cr_post();
  if (m.cr_pre != 0) m.ci = (m.cr_post - m.cr_pre) / m.cr_pre;
  auto rate = [](const std::set<QuestionId>& from, const std::set<QuestionId>& to) -> MaybeRational {
    return ratio_or_na(static_cast<std::int64_t>(intersection_size(from, to)), static_cast<std::int64_t>(from.size()));
  };
  m.i2c = rate(ledger.i_pre(), ledger.c_post());
  m.e2c = rate(ledger.e_pre(), ledger.c_post());
  m.c2i = rate(ledger.c_pre(), ledger.i_post());
  m.c2e = rate(ledger.c_pre(), ledger.e_post());
  return m;
}

EfficiencySummary efficiency_summary(std::span<const RunBundle> bundles, ModuleKind stage,
                                     const std::set<QuestionId>& excluded) {
  EfficiencySummary s;
  for (const auto& b : bundles) {
    if (excluded.count(b.question.question_id)) continue;
    ++s.questions;
    const auto& records = b.records(stage);
    if (records.empty()) s.missing.push_back(b.question.question_id);
    for (const auto& r : records) {
      s.total_tokens += r.token_cost;
      s.total_llm_calls += r.llm_calls;
    }
  }
  if (s.questions > 0) {
    const auto n = static_cast<std::int64_t>(s.questions);
    s.mean_tokens = Rational(BigInt(s.total_tokens), BigInt(n));
    s.mean_llm_calls = Rational(BigInt(s.total_llm_calls), BigInt(n));
  }
  return s;
}

}  // namespace sqlharness
