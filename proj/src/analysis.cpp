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

#include "sqlharness/analysis.hpp"

#include <algorithm>

namespace sqlharness {

std::string_view to_string(StratumDimension d) {
  switch (d) {
    case StratumDimension::kDifficulty: return "difficulty";
    case StratumDimension::kDatabase: return "database";
    case StratumDimension::kRecallBand: return "recall_band";
  }
  return "";
}

StratumDimension parse_stratum_dimension(std::string_view text) {
  if (text == "difficulty") return StratumDimension::kDifficulty;
  if (text == "database") return StratumDimension::kDatabase;
  if (text == "recall_band") return StratumDimension::kRecallBand;
  throw std::invalid_argument("unknown stratification dimension '" + std::string(text) + "'");
}

std::string StratumKey::label() const {
  if (dimension == StratumDimension::kRecallBand) return value;
  return std::string(to_string(dimension)) + "=" + value;
}

std::map<StratumKey, OutcomeRates> stratify(std::span<const Judgment> judgments, StratumDimension dimension,
                                            const StratumFn& value_of) {
  std::map<std::string, std::vector<Judgment>> groups;
  for (const auto& j : judgments) {
    if (auto v = value_of(j.question_id)) groups[*v].push_back(j);
  }
  std::map<StratumKey, OutcomeRates> out;
  for (const auto& [value, list] : groups) {
    out.emplace(StratumKey{dimension, value}, outcome_rates(std::span<const Judgment>(list)));
  }
  return out;
}

std::map<StratumKey, OutcomeRates> stratify(std::span<const Judgment> judgments,
                                            const std::map<QuestionId, QuestionRecord>& questions,
                                            StratumDimension dimension, const std::map<QuestionId, bool>* full_recall) {
  StratumFn fn = [&](QuestionId q) -> std::optional<std::string> {
    switch (dimension) {
      case StratumDimension::kDifficulty: {
        auto it = questions.find(q);
        if (it == questions.end()) return std::string(to_string(Difficulty::kUnlabeled));
        return std::string(to_string(it->second.difficulty));
      }
      case StratumDimension::kDatabase: {
        auto it = questions.find(q);
        if (it == questions.end()) return std::nullopt;
        return it->second.db_id;
      }
      case StratumDimension::kRecallBand: {
        if (!full_recall) return std::nullopt;
        auto it = full_recall->find(q);
        if (it == full_recall->end()) return std::nullopt;
        return std::string(it->second ? kRecallFull : kRecallPartial);
      }
    }
    return std::nullopt;
  };
  return stratify(judgments, dimension, fn);
}

std::string_view to_string(CoefficientKind kind) { return kind == CoefficientKind::kJaccard ? "jaccard" : "overlap"; }

CoefficientKind parse_coefficient_kind(std::string_view text) {
  if (text == "jaccard") return CoefficientKind::kJaccard;
  if (text == "overlap") return CoefficientKind::kOverlap;
  throw std::invalid_argument("unknown overlap coefficient '" + std::string(text) + "'");
}

Rational set_coefficient(const std::set<QuestionId>& a, const std::set<QuestionId>& b, CoefficientKind kind) {
  std::size_t common = 0;
  for (auto q : a) common += b.count(q);
  const std::size_t den = kind == CoefficientKind::kJaccard ? a.size() + b.size() - common : std::min(a.size(), b.size());
  if (den == 0) return Rational(0);
  return ratio(static_cast<std::int64_t>(common), static_cast<std::int64_t>(den));
}

OverlapMatrix incorrect_overlap(std::span<const MethodSet> methods, CoefficientKind kind) {
  if (methods.size() < 2) throw MetricError("overlap matrix needs at least two methods");
  const auto& base = methods.front();
  for (const auto& m : methods.subspan(1)) {
    if (m.universe == base.universe) continue;
    std::vector<QuestionId> diff;
    std::set_symmetric_difference(base.universe.begin(), base.universe.end(), m.universe.begin(), m.universe.end(),
                                  std::back_inserter(diff));
    std::string ids;
    for (auto q : diff) ids += (ids.empty() ? "" : ", ") + std::to_string(q);
    throw MetricError("methods '" + base.method + "' and '" + m.method +
                      "' cover different questions; symmetric difference: " + ids);
  }
  OverlapMatrix out;
  out.kind = kind;
  const std::size_t n = methods.size();
  out.coefficients.assign(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    out.methods.push_back(methods[i].method);
    for (std::size_t j = 0; j < n; ++j) {
      out.coefficients[i][j] = set_coefficient(methods[i].members, methods[j].members, kind);
    }
  }
  return out;
}

SolvabilityHistogram solvability_histogram(std::span<const MethodSet> solved, std::span<const QuestionRecord> questions) {
  if (solved.empty()) throw MetricError("solvability histogram needs at least one method");
  SolvabilityHistogram h;
  h.methods = solved.size();
  h.total.assign(h.methods + 1, 0);
  for (const auto& q : questions) {
    std::size_t count = 0;
    for (const auto& m : solved) count += m.members.count(q.question_id);
    auto& bins = h.by_difficulty[q.difficulty];
    if (bins.empty()) bins.assign(h.methods + 1, 0);
    ++bins[count];
    ++h.total[count];
    if (count == 0) h.unsolved.push_back(q.question_id);
  }
  std::sort(h.unsolved.begin(), h.unsolved.end());
  return h;
}

RecallConditioned recall_conditioned_rates(std::span<const RecallRow> rows) {
  struct Acc {
    std::size_t n = 0, cg_n = 0, cg_c = 0, qr_n = 0, qr_c = 0;
  };
  std::map<std::string, Acc> acc;
  RecallConditioned out;
  for (const auto& r : rows) {
    if (!r.full_recall) {
      ++out.excluded;
      continue;
    }
    auto& a = acc[std::string(*r.full_recall ? kRecallFull : kRecallPartial)];
    ++a.n;
    if (r.candidate) {
      ++a.cg_n;
      a.cg_c += r.candidate->is_correct();
    }
    if (r.revision) {
      ++a.qr_n;
      a.qr_c += r.revision->is_correct();
    }
  }
  for (const auto& [band, a] : acc) {
    BandRates b;
    b.questions = a.n;
    b.candidate_correct_rate = ratio_or_na(static_cast<std::int64_t>(a.cg_c), static_cast<std::int64_t>(a.cg_n));
    b.revision_correct_rate = ratio_or_na(static_cast<std::int64_t>(a.qr_c), static_cast<std::int64_t>(a.qr_n));
    out.bands.emplace(band, b);
  }
  return out;
}

ConditionedRecall outcome_conditioned_recall(std::span<const RecallSample> samples) {
  Rational sum[4];
  std::int64_t count[4] = {0, 0, 0, 0};
  for (const auto& s : samples) {
    if (s.candidate) {
      const int slot = s.candidate->is_correct() ? 0 : 1;
      sum[slot] += s.recall;
      ++count[slot];
    }
    if (s.revision) {
      const int slot = s.revision->is_correct() ? 2 : 3;
      sum[slot] += s.recall;
      ++count[slot];
    }
  }
  auto mean = [&](int i) -> MaybeRational {
    if (count[i] == 0) return std::nullopt;
    return sum[i] / Rational(count[i]);
  };
  return {mean(0), mean(1), mean(2), mean(3)};
}

}  // namespace sqlharness
