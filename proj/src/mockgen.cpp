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

#include "sqlharness/mockgen.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <set>

#include "sqlharness/catalog.hpp"
#include "sqlharness/executor.hpp"
#include "sqlharness/report.hpp"
#include "sqlharness/schema_extract.hpp"
#include "sqlharness/sql_lexer.hpp"

namespace sqlharness {

namespace fs = std::filesystem;

namespace {

// Raw 64-bit engine output mapped by hand so sequences do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x < limit) return x % n;
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

std::optional<std::int64_t> exact_count(const Rational& rate, std::size_t n) {
  const Rational c = rate * Rational(static_cast<long long>(n));
  if (denominator(c) != 1) return std::nullopt;
  return static_cast<std::int64_t>(numerator(c));
}

std::int64_t must_count(const Rational& rate, std::size_t n) { return *exact_count(rate, n); }

Rational rate_field(const Json& doc, const char* key, const Rational& fallback) {
  if (!doc.contains(key)) return fallback;
  const Json& v = doc.at(key);
  try {
    if (v.is_string()) return parse_decimal(v.get<std::string>());
    if (v.is_number()) return parse_decimal(v.dump());
  } catch (const std::exception&) {
  }
  throw ValidationError(std::string("profile: ") + key + " is not a rate");
}

bool in_unit(const Rational& r) { return r >= 0 && r <= 1; }

std::string strip_statement(std::string sql) {
  while (!sql.empty() && (std::isspace(static_cast<unsigned char>(sql.back())) || sql.back() == ';')) sql.pop_back();
  return sql;
}

std::string splice(const std::string& s, std::size_t at, std::size_t len, const std::string& with) {
  return s.substr(0, at) + with + s.substr(at + len);
}

class Mutator {
 public:
  Mutator(const fs::path& db, const Catalog& catalog, Duration timeout)
      : runner_(db), catalog_(catalog), timeout_(timeout) {}

  ExecutionResult run(const std::string& sql) { return runner_.run(sql, timeout_); }

  // Executes and differs from gold under set comparison (hence also under
  // multiset comparison).
  std::string incorrect(const std::string& gold_sql, const Rows& gold_rows) {
    const std::string gold = strip_statement(gold_sql);
    std::vector<std::string> attempts;
    try {
      const auto tokens = sql::tokenize(gold);
      for (const auto& t : tokens) {
        if (t.kind == sql::TokenKind::kNumber && t.text.find_first_not_of("0123456789") == std::string::npos &&
            t.text.size() < 15) {
          attempts.push_back(splice(gold, t.offset, t.text.size(), std::to_string(std::stoll(t.text) + 1)));
        }
      }
      for (const auto& t : tokens) {
        if (t.kind == sql::TokenKind::kString && t.text.size() >= 2) {
          attempts.push_back(splice(gold, t.offset + t.text.size() - 1, 0, "_mock"));
        }
      }
    } catch (const sql::ParseError&) {
    }
    for (const auto& a : attempts) {
      auto r = run(a);
      if (r.ok() && !compare_results(r.rows, gold_rows)) return a;
    }
    std::string fallback = "SELECT *, 1 FROM (" + gold + ")";
    auto r = run(fallback);
    if (!r.ok() || compare_results(r.rows, gold_rows)) {
      throw ValidationError("cannot build an incorrect variant of: " + gold_sql);
    }
    return fallback;
  }

  std::string error(const std::string& gold_sql, ErrorCategory category) {
    const std::string gold = strip_statement(gold_sql);
    std::vector<std::string> attempts;
    switch (category) {
      case ErrorCategory::kNoTableOrColumn:
        attempts.push_back(misspell_table(gold));
        attempts.push_back("SELECT * FROM mock_missing_table");
        break;
      case ErrorCategory::kNoFunction:
        attempts.push_back("SELECT no_such_fn_mock(1)");
        break;
      case ErrorCategory::kSyntaxError:
        attempts.push_back(keyword_typo(gold));
        attempts.push_back("SELEC 1");
        break;
      case ErrorCategory::kTimeout:
        // Unbounded recursion; stopped only by the timeout.
        return "WITH RECURSIVE mock_r(n) AS (SELECT 1 UNION ALL SELECT n + 1 FROM mock_r) "
               "SELECT count(*) FROM mock_r";
      case ErrorCategory::kOther:
        attempts.push_back(gold + "; SELECT 1");
        break;
    }
    for (const auto& a : attempts) {
      if (a.empty()) continue;
      auto r = run(a);
      if (!r.ok() && classify_error(r) == category) return a;
    }
    throw ValidationError("cannot build a " + std::string(to_string(category)) + " variant of: " + gold_sql);
  }

 private:
  std::string misspell_table(const std::string& gold) {
    try {
      const auto tokens = sql::tokenize(gold);
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (!tokens[i - 1].is_word("FROM") && !tokens[i - 1].is_word("JOIN")) continue;
        const auto& t = tokens[i];
        if (t.kind != sql::TokenKind::kWord || !catalog_.find(t.text)) continue;
        return splice(gold, t.offset, t.text.size(), t.text + "_mock_missing");
      }
    } catch (const sql::ParseError&) {
    }
    return "";
  }

  static std::string keyword_typo(const std::string& gold) {
    try {
      for (const auto& t : sql::tokenize(gold)) {
        if (t.is_word("FROM")) return splice(gold, t.offset, t.text.size(), "FORM");
      }
    } catch (const sql::ParseError&) {
    }
    return "";
  }

  QueryRunner runner_;
  const Catalog& catalog_;
  Duration timeout_;
};

// Hand-counted expectations.

struct PlannedQuestion {
  const QuestionRecord* question = nullptr;
  OutcomeLabel first;                       // candidate 0
  std::optional<std::size_t> first_correct;  // earliest Correct candidate
  std::optional<OutcomeLabel> revised;
  std::optional<bool> full_recall;
};

Json percent(const Rational& r) { return make_cell(r, CellKind::kPercent); }
Json percent_or_na(std::size_t num, std::size_t den) {
  if (den == 0) return make_cell(std::nullopt, CellKind::kPercent);
  return percent(ratio(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)));
}

Json rates_block(const std::vector<const PlannedQuestion*>& subset, bool revised, std::size_t candidates,
                 const std::vector<std::size_t>& ks) {
  std::size_t c = 0, i = 0, e = 0;
  std::map<std::string, std::size_t> breakdown;
  for (auto cat : kAllErrorCategories) breakdown[std::string(to_string(cat))] = 0;
  for (const auto* p : subset) {
    const OutcomeLabel& l = revised ? *p->revised : p->first;
    if (l.outcome == Outcome::kCorrect) ++c;
    if (l.outcome == Outcome::kIncorrect) ++i;
    if (l.outcome == Outcome::kError) {
      ++e;
      ++breakdown[std::string(to_string(l.category))];
    }
  }
  const std::size_t n = subset.size();
  Json out = {{"questions", n},
              {"correct", c},
              {"incorrect", i},
              {"error", e},
              {"correct_rate", percent_or_na(c, n)},
              {"incorrect_rate", percent_or_na(i, n)},
              {"error_rate", percent_or_na(e, n)},
              {"error_breakdown", breakdown}};
  Json pass = Json::object(), short_rows = Json::object();
  const std::size_t width = revised ? 1 : candidates;
  for (auto k : ks) {
    std::size_t hits = 0;
    for (const auto* p : subset) {
      if (revised) {
        hits += p->revised->outcome == Outcome::kCorrect;
      } else {
        hits += p->first_correct && *p->first_correct < k;
      }
    }
    pass[std::to_string(k)] = percent_or_na(hits, n);
    short_rows[std::to_string(k)] = width < k ? n : 0;
  }
  out["pass_at_k"] = pass;
  out["short_rows"] = short_rows;
  return out;
}

Json strata_block(const std::vector<PlannedQuestion>& plan, bool revised, std::size_t candidates,
                  const std::vector<std::size_t>& ks) {
  std::map<std::string, std::vector<const PlannedQuestion*>> groups;
  for (const auto& p : plan) {
    groups["all"].push_back(&p);
    groups["difficulty=" + std::string(to_string(p.question->difficulty))].push_back(&p);
    groups["database=" + p.question->db_id].push_back(&p);
    if (p.full_recall) groups[*p.full_recall ? "recall=1" : "recall<1"].push_back(&p);
  }
  Json out = Json::object();
  for (const auto& [label, subset] : groups) out[label] = rates_block(subset, revised, candidates, ks);
  return out;
}

struct UsageTally {
  std::uint64_t tokens = 0;
  std::uint64_t calls = 0;
};

Json efficiency_block(const UsageTally& t, std::size_t n) {
  const auto q = static_cast<std::int64_t>(n);
  return {{"questions", n},
          {"mean_tokens", make_cell(Rational(BigInt(t.tokens), BigInt(q)), CellKind::kPlain)},
          {"mean_llm_calls", make_cell(Rational(BigInt(t.calls), BigInt(q)), CellKind::kPlain)},
          {"total_tokens", t.tokens},
          {"total_llm_calls", t.calls},
          {"missing", Json::array()}};
}

template <typename T>
std::size_t common(const std::set<T>& a, const std::set<T>& b) {
  std::size_t n = 0;
  for (const auto& x : a) n += b.count(x);
  return n;
}

struct PrfSums {
  Rational p, r, f;
  std::size_t overlap = 0, selected = 0, gold = 0, scored = 0, empty = 0;

  template <typename T>
  void add(const std::set<T>& selected_set, const std::set<T>& gold_set) {
    const std::size_t o = common(selected_set, gold_set);
    const Rational precision = selected_set.empty() ? Rational(0) : ratio(o, selected_set.size());
    const Rational recall = ratio(o, gold_set.size());
    p += precision;
    r += recall;
    f += precision + recall == 0 ? Rational(0) : 2 * precision * recall / (precision + recall);
    overlap += o;
    selected += selected_set.size();
    gold += gold_set.size();
    ++scored;
    empty += selected_set.empty();
  }

  Json to_json() const {
    if (scored == 0) return nullptr;
    const Rational n(static_cast<long long>(scored));
    const Rational mp = selected == 0 ? Rational(0) : ratio(overlap, selected);
    const Rational mr = ratio(overlap, gold);
    const Rational mf = mp + mr == 0 ? Rational(0) : 2 * mp * mr / (mp + mr);
    return {{"scored", scored},
            {"empty_selections", empty},
            {"macro", {{"precision", percent(p / n)}, {"recall", percent(r / n)}, {"f1", percent(f / n)}}},
            {"micro", {{"precision", percent(mp)}, {"recall", percent(mr)}, {"f1", percent(mf)}}}};
  }
};

}  // namespace

void MockProfile::validate() const {
  auto check_unit = [&](const Rational& r, const char* what) {
    if (!in_unit(r)) throw ValidationError("profile '" + name + "': " + what + " must lie in [0, 1]");
  };
  check_unit(candidate.correct, "correct rate");
  check_unit(candidate.incorrect, "incorrect rate");
  check_unit(candidate.error, "error rate");
  if (candidate.correct + candidate.incorrect + candidate.error != 1) {
    throw ValidationError("profile '" + name + "': candidate rates must sum to 1");
  }
  if (candidates < 1) throw ValidationError("profile '" + name + "': candidates must be at least 1");
  check_unit(rescue, "rescue");
  if (rescue > 0 && candidates < 2) throw ValidationError("profile '" + name + "': rescue needs candidates >= 2");
  if (rescue > candidate.incorrect + candidate.error) {
    throw ValidationError("profile '" + name + "': rescue exceeds the non-correct share");
  }
  if (candidate.error > 0 && error_categories.empty()) {
    throw ValidationError("profile '" + name + "': error rate needs at least one error category");
  }
  if (revision) {
    check_unit(revision->i2c, "i2c");
    check_unit(revision->e2c, "e2c");
    check_unit(revision->c2i, "c2i");
    check_unit(revision->c2e, "c2e");
    if (revision->c2i + revision->c2e > 1) throw ValidationError("profile '" + name + "': c2i + c2e exceeds 1");
    if (revision->c2e > 0 && error_categories.empty()) {
      throw ValidationError("profile '" + name + "': c2e needs at least one error category");
    }
  }
  if (schema) {
    check_unit(schema->drop_column, "drop_column");
    check_unit(schema->add_spurious, "add_spurious");
  }
  if (min_tokens > max_tokens) throw ValidationError("profile '" + name + "': min_tokens exceeds max_tokens");
}

MockProfile parse_profile(const Json& doc) {
  if (!doc.is_object()) throw ValidationError("profile must be a JSON object");
  MockProfile p;
  try {
    p.name = doc.value("name", p.name);
    p.seed = doc.value("seed", p.seed);
    if (doc.contains("questions")) p.questions = doc.at("questions").get<std::size_t>();
    if (!doc.contains("candidate_generation")) throw ValidationError("profile lacks candidate_generation rates");
    const Json& cg = doc.at("candidate_generation");
    p.candidate = {rate_field(cg, "correct", 0), rate_field(cg, "incorrect", 0), rate_field(cg, "error", 0)};
    if (doc.contains("error_categories")) {
      p.error_categories.clear();
      for (const auto& c : doc.at("error_categories")) {
        auto cat = parse_error_category(c.get<std::string>());
        if (!cat) throw ValidationError("profile: unknown error category " + c.dump());
        p.error_categories.push_back(*cat);
      }
    }
    p.candidates = doc.value("candidates", p.candidates);
    p.rescue = rate_field(doc, "rescue", 0);
    if (doc.contains("query_revision")) {
      const Json& qr = doc.at("query_revision");
      p.revision = TransitionRates{rate_field(qr, "i2c", 0), rate_field(qr, "e2c", 0), rate_field(qr, "c2i", 0),
                                   rate_field(qr, "c2e", 0)};
    }
    if (doc.contains("schema_selection")) {
      const Json& ss = doc.at("schema_selection");
      p.schema = SchemaNoise{rate_field(ss, "drop_column", 0), rate_field(ss, "add_spurious", 0)};
    }
    p.min_tokens = doc.value("min_tokens", p.min_tokens);
    p.max_tokens = doc.value("max_tokens", p.max_tokens);
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("profile: ") + e.what());
  }
  p.validate();
  return p;
}

MockProfile load_profile(const fs::path& path) { return parse_profile(read_json_file(path)); }

bool profile_feasible(const MockProfile& p, std::size_t n) {
  if (n == 0) return false;
  const auto c = exact_count(p.candidate.correct, n);
  const auto i = exact_count(p.candidate.incorrect, n);
  const auto e = exact_count(p.candidate.error, n);
  if (!c || !i || !e) return false;
  if (!exact_count(p.rescue, n)) return false;
  if (p.revision) {
    if (!exact_count(p.revision->c2i, static_cast<std::size_t>(*c)) ||
        !exact_count(p.revision->c2e, static_cast<std::size_t>(*c)) ||
        !exact_count(p.revision->i2c, static_cast<std::size_t>(*i)) ||
        !exact_count(p.revision->e2c, static_cast<std::size_t>(*e))) {
      return false;
    }
  }
  if (p.schema && (!exact_count(p.schema->drop_column, n) || !exact_count(p.schema->add_spurious, n))) return false;
  return true;
}

std::optional<std::size_t> smallest_feasible(const MockProfile& profile, std::size_t limit) {
  for (std::size_t n = 1; n < limit; ++n) {
    if (profile_feasible(profile, n)) return n;
  }
  return std::nullopt;
}

MockOutput generate(const MockProfile& profile, const DatasetManifest& dataset, const MockOptions& options) {
  profile.validate();
  auto questions = load_dataset(dataset);
  std::sort(questions.begin(), questions.end(),
            [](const QuestionRecord& a, const QuestionRecord& b) { return a.question_id < b.question_id; });
  const std::size_t n = profile.questions.value_or(questions.size());
  if (n == 0 || n > questions.size()) {
    throw ValidationError("profile '" + profile.name + "' asks for " + std::to_string(n) + " questions; dataset has " +
                          std::to_string(questions.size()));
  }
  if (!profile_feasible(profile, n)) {
    auto smallest = smallest_feasible(profile);
    throw ValidationError("profile '" + profile.name + "' is infeasible over " + std::to_string(n) +
                          " questions (counts are not integers); smallest feasible question count is " +
                          (smallest ? std::to_string(*smallest) : std::string("none below 100000")));
  }
  questions.resize(n);

  MockOutput out;
  out.method = profile.name;
  out.source = dataset;
  out.chosen = questions;
  const Duration timeout = std::chrono::duration_cast<Duration>(options.validation_timeout);

  std::map<std::string, Catalog> catalogs;
  std::map<std::string, std::unique_ptr<Mutator>> mutators;
  std::vector<Rows> gold_rows(n);
  std::vector<SchemaSet> gold_schema(n);
  for (std::size_t q = 0; q < n; ++q) {
    const auto& rec = out.chosen[q];
    if (!catalogs.count(rec.db_id)) {
      const auto path = dataset.database_path(rec.db_id);
      catalogs.emplace(rec.db_id, catalog_from_database(path, true));
      mutators.emplace(rec.db_id, std::make_unique<Mutator>(path, catalogs.at(rec.db_id), timeout));
    }
    auto r = mutators.at(rec.db_id)->run(rec.gold_sql);
    if (!r.ok()) {
      throw ValidationError("gold SQL of question " + std::to_string(rec.question_id) + " does not execute: " +
                            (r.timed_out() ? std::string("timeout") : r.message));
    }
    gold_rows[q] = std::move(r.rows);
    gold_schema[q] = extract_schema(rec.gold_sql, catalogs.at(rec.db_id)).schema;
  }

  Rng rng(profile.seed);
  std::vector<std::size_t> order(n);
  for (std::size_t q = 0; q < n; ++q) order[q] = q;
  rng.shuffle(order);

  std::vector<PlannedQuestion> plan(n);
  const auto c = must_count(profile.candidate.correct, n);
  const auto i = must_count(profile.candidate.incorrect, n);
  std::size_t next_category = 0;
  auto take_category = [&] {
    return profile.error_categories[next_category++ % profile.error_categories.size()];
  };
  for (std::size_t pos = 0; pos < n; ++pos) {
    auto& p = plan[order[pos]];
    p.question = &out.chosen[order[pos]];
    if (static_cast<std::int64_t>(pos) < c) {
      p.first = OutcomeLabel::correct();
    } else if (static_cast<std::int64_t>(pos) < c + i) {
      p.first = OutcomeLabel::incorrect();
    } else {
      p.first = OutcomeLabel::error(take_category());
    }
  }

  // Candidate slots. A Correct first candidate is repeated; otherwise later
  // slots are Incorrect except an optional rescue slot.
  std::vector<std::vector<OutcomeLabel>> slots(n);
  std::int64_t rescued = 0;
  const auto rescue_target = must_count(profile.rescue, n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t q = order[pos];
    auto& p = plan[q];
    slots[q].push_back(p.first);
    std::optional<std::size_t> later;
    if (!p.first.is_correct() && rescued < rescue_target) {
      later = 1 + rng.below(profile.candidates - 1);
      ++rescued;
    }
    for (std::size_t j = 1; j < profile.candidates; ++j) {
      const bool correct = p.first.is_correct() || (later && *later == j);
      slots[q].push_back(correct ? OutcomeLabel::correct() : OutcomeLabel::incorrect());
    }
    if (p.first.is_correct()) {
      p.first_correct = 0;
    } else {
      p.first_correct = later;
    }
  }

  std::int64_t c_post_count = 0;
  if (profile.revision) {
    const auto& t = *profile.revision;
    std::vector<std::size_t> cs, is, es;
    for (auto q : order) {
      (plan[q].first.is_correct() ? cs : plan[q].first.is_incorrect() ? is : es).push_back(q);
    }
    const auto c2i = must_count(t.c2i, cs.size()), c2e = must_count(t.c2e, cs.size());
    for (std::size_t k = 0; k < cs.size(); ++k) {
      const auto kk = static_cast<std::int64_t>(k);
      plan[cs[k]].revised = kk < c2i          ? OutcomeLabel::incorrect()
                            : kk < c2i + c2e ? OutcomeLabel::error(take_category())
                                             : OutcomeLabel::correct();
    }
    const auto i2c = must_count(t.i2c, is.size());
    for (std::size_t k = 0; k < is.size(); ++k) {
      plan[is[k]].revised = static_cast<std::int64_t>(k) < i2c ? OutcomeLabel::correct() : OutcomeLabel::incorrect();
    }
    const auto e2c = must_count(t.e2c, es.size());
    for (std::size_t k = 0; k < es.size(); ++k) {
      plan[es[k]].revised = static_cast<std::int64_t>(k) < e2c ? OutcomeLabel::correct() : plan[es[k]].first;
    }
    for (const auto& p : plan) c_post_count += p.revised->is_correct();
  }

  std::vector<SchemaSet> selected(n);
  if (profile.schema) {
    std::vector<std::size_t> schema_order = order;
    rng.shuffle(schema_order);
    const auto drops = must_count(profile.schema->drop_column, n);
    const auto adds = must_count(profile.schema->add_spurious, n);
    std::vector<bool> drop(n, false), add(n, false);
    std::int64_t dropped = 0, added = 0;
    for (auto q : schema_order) {
      if (dropped < drops && !gold_schema[q].columns().empty()) {
        drop[q] = true;
        ++dropped;
      }
    }
    for (auto q : schema_order) {
      if (added >= adds) break;
      const auto& catalog = catalogs.at(out.chosen[q].db_id);
      const auto gold_tables = gold_schema[q].tables();
      if (std::any_of(catalog.tables().begin(), catalog.tables().end(),
                      [&](const auto& t) { return !gold_tables.count(t.first) && !t.second.empty(); })) {
        add[q] = true;
        ++added;
      }
    }
    for (std::size_t q = 0; q < n; ++q) {
      const auto cols = gold_schema[q].columns();
      const std::optional<std::pair<std::string, std::string>> victim =
          drop[q] ? std::optional(*cols.rbegin()) : std::nullopt;
      SchemaSet s;
      for (const auto& [table, columns] : gold_schema[q].entries()) {
        s.add_table(table);
        for (const auto& col : columns) {
          if (!victim || *victim != std::pair(table, col)) s.add_column(table, col);
        }
      }
      if (add[q]) {
        const auto gold_tables = gold_schema[q].tables();
        for (const auto& [table, columns] : catalogs.at(out.chosen[q].db_id).tables()) {
          if (gold_tables.count(table) || columns.empty()) continue;
          s.add_column(table, columns.front());
          break;
        }
      }
      selected[q] = s;
      // Table recall stays 1 (only columns are dropped); column recall drops
      // below 1 exactly when a column was removed.
      plan[q].full_recall = !drop[q];
    }
  }

  // Materialize SQL, one mutant per (question, kind).
  std::map<std::pair<std::size_t, int>, std::string> sql_cache;
  auto sql_for = [&](std::size_t q, const OutcomeLabel& l) -> std::string {
    const int key = l.is_correct() ? -2 : l.is_incorrect() ? -1 : static_cast<int>(l.category);
    auto it = sql_cache.find({q, key});
    if (it != sql_cache.end()) return it->second;
    auto& m = *mutators.at(out.chosen[q].db_id);
    std::string sql = l.is_correct()     ? out.chosen[q].gold_sql
                      : l.is_incorrect() ? m.incorrect(out.chosen[q].gold_sql, gold_rows[q])
                                         : m.error(out.chosen[q].gold_sql, l.category);
    sql_cache.emplace(std::pair(q, key), sql);
    return sql;
  };

  UsageTally usage[3];
  auto record = [&](std::size_t q, ModuleKind kind, std::uint64_t index) {
    RunRecord r;
    r.node_type = kind;
    r.question = out.chosen[q].question;
    r.question_id = out.chosen[q].question_id;
    r.db_id = out.chosen[q].db_id;
    r.token_cost = profile.min_tokens + rng.below(profile.max_tokens - profile.min_tokens + 1);
    r.llm_calls = 1;
    r.prompt_tokens = r.token_cost * 3 / 4;
    r.completion_tokens = r.token_cost - *r.prompt_tokens;
    r.candidate_index = index;
    usage[static_cast<int>(kind)].tokens += r.token_cost;
    usage[static_cast<int>(kind)].calls += r.llm_calls;
    return r;
  };

  out.run_file = Json::array();
  for (std::size_t q = 0; q < n; ++q) {
    if (profile.schema) {
      RunRecord r = record(q, ModuleKind::kSchemaSelection, 0);
      r.extracted_schema = selected[q];
      out.run_file.push_back(serialize_record(r));
    }
    for (std::size_t j = 0; j < slots[q].size(); ++j) {
      RunRecord r = record(q, ModuleKind::kCandidateGeneration, j);
      r.sql = sql_for(q, slots[q][j]);
      out.run_file.push_back(serialize_record(r));
    }
    if (profile.revision) {
      RunRecord r = record(q, ModuleKind::kQueryRevision, 0);
      r.sql = sql_for(q, *plan[q].revised);
      out.run_file.push_back(serialize_record(r));
    }
  }

  // Expected values, counted from the plan.
  Json stages = Json::object();
  stages["candidate_generation"] = {
      {"strata", strata_block(plan, false, profile.candidates, options.k_list)},
      {"efficiency", efficiency_block(usage[static_cast<int>(ModuleKind::kCandidateGeneration)], n)}};
  if (profile.revision) {
    stages["query_revision"] = {
        {"strata", strata_block(plan, true, 1, options.k_list)},
        {"efficiency", efficiency_block(usage[static_cast<int>(ModuleKind::kQueryRevision)], n)}};
  }
  if (profile.schema) {
    PrfSums table, column;
    std::size_t column_na = 0;
    for (std::size_t q = 0; q < n; ++q) {
      table.add(selected[q].tables(), gold_schema[q].tables());
      if (gold_schema[q].columns().empty()) {
        ++column_na;
      } else {
        column.add(selected[q].columns(), gold_schema[q].columns());
      }
    }
    Json all = {{"questions", n},
                {"missing", 0},
                {"column_not_applicable", column_na},
                {"table", table.to_json()},
                {"column", column.to_json()}};
    stages["schema_selection"] = {
        {"strata", {{"all", all}}},
        {"efficiency", efficiency_block(usage[static_cast<int>(ModuleKind::kSchemaSelection)], n)}};
  }
  Json method = {{"questions", n}, {"stages", stages}};
  if (profile.revision) {
    std::size_t cp = 0, ip = 0, ep = 0, i2c = 0, e2c = 0, c2i = 0, c2e = 0;
    for (const auto& p : plan) {
      const auto& post = *p.revised;
      if (p.first.is_correct()) {
        ++cp;
        c2i += post.is_incorrect();
        c2e += post.is_error();
      } else if (p.first.is_incorrect()) {
        ++ip;
        i2c += post.is_correct();
      } else {
        ++ep;
        e2c += post.is_correct();
      }
    }
    Json ci = cp == 0 ? make_cell(std::nullopt, CellKind::kPercent)
                      : percent(Rational(c_post_count - static_cast<std::int64_t>(cp)) /
                                Rational(static_cast<long long>(cp)));
    method["revision"] = {{"ci", ci},
                          {"i2c", percent_or_na(i2c, ip)},
                          {"e2c", percent_or_na(e2c, ep)},
                          {"c2i", percent_or_na(c2i, cp)},
                          {"c2e", percent_or_na(c2e, cp)},
                          {"cr_pre", percent_or_na(cp, n)},
                          {"cr_post", percent_or_na(static_cast<std::size_t>(c_post_count), n)},
                          {"questions", n}};
  }

  const std::string dataset_name = dataset.name + "-" + profile.name;
  out.expected = {{"schema_version", kMetricsSchemaVersion},
                  {"header", {{"dataset", dataset_name}, {"scored_questions", n}, {"excluded_count", 0}}},
                  {"methods", {{profile.name, method}}}};

  out.questions = Json::array();
  for (const auto& q : out.chosen) {
    out.questions.push_back({{"question_id", q.question_id},
                             {"db_id", q.db_id},
                             {"question", q.question},
                             {"evidence", q.evidence.value_or("")},
                             {"SQL", q.gold_sql},
                             {"difficulty", q.difficulty == Difficulty::kUnlabeled ? std::string()
                                                                                   : std::string(to_string(q.difficulty))}});
  }
  return out;
}

void write_mock(const MockOutput& output, const fs::path& out_dir) {
  write_text_file(out_dir / "runs" / (output.method + ".json"), output.run_file.dump(2) + "\n");
  write_text_file(out_dir / "expected.json", output.expected.dump(2) + "\n");
  write_text_file(out_dir / "dataset" / "questions.json", output.questions.dump(2) + "\n");
  Json manifest = {{"name", output.source.name + "-" + output.method},
                   {"questions_path", "questions.json"},
                   {"databases_root", fs::absolute(output.source.databases_root).lexically_normal().string()}};
  write_text_file(out_dir / "dataset" / "manifest.json", manifest.dump(2) + "\n");
}

namespace {

void compare_into(const Json& expected, const Json& actual, const std::string& path, std::vector<std::string>& out) {
  if (is_cell(expected)) {
    if (!is_cell(actual)) {
      out.push_back(path + ": expected a metric cell, found " + actual.dump());
      return;
    }
    if (cell_value(expected) != cell_value(actual) || expected.at("rendered") != actual.at("rendered")) {
      out.push_back(path + ": expected " + expected.dump() + ", found " + actual.dump());
    }
    return;
  }
  if (expected.is_object()) {
    if (!actual.is_object()) {
      out.push_back(path + ": expected an object, found " + actual.dump());
      return;
    }
    for (const auto& [key, value] : expected.items()) {
      const std::string sub = path + "/" + key;
      if (!actual.contains(key)) {
        out.push_back(sub + ": missing");
        continue;
      }
      compare_into(value, actual.at(key), sub, out);
    }
    return;
  }
  if (expected.is_array()) {
    if (!actual.is_array() || actual.size() != expected.size()) {
      out.push_back(path + ": expected " + expected.dump() + ", found " + actual.dump());
      return;
    }
    for (std::size_t i = 0; i < expected.size(); ++i) compare_into(expected[i], actual[i], path + "/" + std::to_string(i), out);
    return;
  }
  if (expected != actual) out.push_back(path + ": expected " + expected.dump() + ", found " + actual.dump());
}

}  // namespace

std::vector<std::string> compare_expected(const Json& expected, const Json& actual) {
  std::vector<std::string> out;
  compare_into(expected, actual, "", out);
  return out;
}

}  // namespace sqlharness
