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

// Cross-cutting studies over judgments: stratification, incorrect-set
// overlap, solvability histograms and recall-conditioned rates.

#ifndef SQLHARNESS_ANALYSIS_HPP_
#define SQLHARNESS_ANALYSIS_HPP_

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sqlharness/metrics.hpp"

namespace sqlharness {

enum class StratumDimension { kDifficulty, kDatabase, kRecallBand };
std::string_view to_string(StratumDimension d);
// Throws std::invalid_argument on an unknown name.
StratumDimension parse_stratum_dimension(std::string_view text);

inline constexpr std::string_view kRecallFull = "recall=1";
inline constexpr std::string_view kRecallPartial = "recall<1";

struct StratumKey {
  StratumDimension dimension = StratumDimension::kDifficulty;
  std::string value;

  auto operator<=>(const StratumKey&) const = default;
  std::string label() const;  // "difficulty=simple"
};

// Returns nullopt for a question that belongs to no stratum.
using StratumFn = std::function<std::optional<std::string>(QuestionId)>;

std::map<StratumKey, OutcomeRates> stratify(std::span<const Judgment> judgments, StratumDimension dimension,
                                            const StratumFn& value_of);

// Difficulty or database from the question records. The recall band needs
// `full_recall`; questions absent from it are left out.
std::map<StratumKey, OutcomeRates> stratify(std::span<const Judgment> judgments,
                                            const std::map<QuestionId, QuestionRecord>& questions,
                                            StratumDimension dimension,
                                            const std::map<QuestionId, bool>* full_recall = nullptr);

enum class CoefficientKind { kJaccard, kOverlap };
std::string_view to_string(CoefficientKind kind);
CoefficientKind parse_coefficient_kind(std::string_view text);

// Jaccard |A∩B|/|A∪B| or overlap |A∩B|/min(|A|,|B|); 0 when undefined.
Rational set_coefficient(const std::set<QuestionId>& a, const std::set<QuestionId>& b, CoefficientKind kind);

struct MethodSet {
  std::string method;
  std::set<QuestionId> universe;  // questions the method was scored on
  std::set<QuestionId> members;   // e.g. questions labeled Incorrect
};

struct OverlapMatrix {
  std::vector<std::string> methods;
  std::vector<std::vector<Rational>> coefficients;
  CoefficientKind kind = CoefficientKind::kJaccard;
};

// Needs at least two methods over one question universe; otherwise throws
// MetricError (the message lists the symmetric difference).
OverlapMatrix incorrect_overlap(std::span<const MethodSet> methods, CoefficientKind kind = CoefficientKind::kJaccard);

struct SolvabilityHistogram {
  std::size_t methods = 0;
  // bins[b] = number of questions solved by exactly b methods.
  std::map<Difficulty, std::vector<std::size_t>> by_difficulty;
  std::vector<std::size_t> total;
  std::vector<QuestionId> unsolved;
};

// `solved` holds, per method, the questions labeled Correct. Throws
// MetricError when no method is given.
SolvabilityHistogram solvability_histogram(std::span<const MethodSet> solved, std::span<const QuestionRecord> questions);

struct RecallRow {
  QuestionId question_id = 0;
  std::optional<bool> full_recall;  // nullopt: no schema record
  std::optional<OutcomeLabel> candidate;
  std::optional<OutcomeLabel> revision;
};

struct BandRates {
  std::size_t questions = 0;
  MaybeRational candidate_correct_rate;
  MaybeRational revision_correct_rate;
};

struct RecallConditioned {
  std::map<std::string, BandRates> bands;  // only non-empty bands
  std::size_t excluded = 0;                // rows without a schema record
};

RecallConditioned recall_conditioned_rates(std::span<const RecallRow> rows);

struct RecallSample {
  QuestionId question_id = 0;
  Rational recall;
  std::optional<OutcomeLabel> candidate;
  std::optional<OutcomeLabel> revision;
};

struct ConditionedRecall {
  MaybeRational candidate_correct;
  MaybeRational candidate_wrong;
  MaybeRational revision_correct;
  MaybeRational revision_wrong;
};

ConditionedRecall outcome_conditioned_recall(std::span<const RecallSample> samples);

}  // namespace sqlharness

#endif  // SQLHARNESS_ANALYSIS_HPP_
