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

#include "support/test_support.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "sqlharness/ingest.hpp"

namespace sqlharness::testing {

fs::path source_dir() { return SQLHARNESS_SOURCE_DIR; }
fs::path mini_manifest() { return source_dir() / "data" / "mini" / "manifest.json"; }
fs::path cli_path() { return SQLHARNESS_CLI; }

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  const auto base = fs::temp_directory_path();
  for (;;) {
    auto candidate = base / ("sqlharness-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    if (fs::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> snapshot_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = read_file(e.path());
  }
  return out;
}

int run_cli(const std::string& args, std::string* output) {
  const std::string cmd = cli_path().string() + " " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  std::string text;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) text.append(buf.data(), n);
  const int status = ::pclose(pipe);
  if (output) *output = text;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig make_config(const fs::path& dataset, const fs::path& runs, const fs::path& out, std::size_t workers) {
  RunConfig c;
  c.dataset = dataset;
  c.runs = runs;
  c.out = out;
  c.timeout = std::chrono::milliseconds(300);
  c.workers = workers;
  return c;
}

fs::path copy_mini_dataset(const fs::path& dir, const std::function<void(Json&)>& edit) {
  const auto src = source_dir() / "data" / "mini";
  fs::create_directories(dir);
  fs::copy(src / "databases", dir / "databases", fs::copy_options::recursive);
  Json questions = read_json_file(src / "dev.json");
  if (edit) edit(questions);
  write_file(dir / "dev.json", questions.dump(2));
  write_file(dir / "manifest.json",
             Json{{"name", "mini-copy"}, {"questions_path", "dev.json"}, {"databases_root", "databases"}}.dump(2));
  return dir / "manifest.json";
}

// ---------------------------------------------------------------------------

Rational to_rational(const Fraction& f) { return Rational(BigInt(f.num), BigInt(f.den)); }

OracleScore oracle_selection(const std::vector<std::string>& selected, const std::vector<std::string>& gold) {
  std::vector<std::string> s = selected, g = gold;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  std::int64_t hit = 0;
  for (const auto& x : s) {
    for (const auto& y : g) hit += x == y;
  }
  OracleScore o;
  const auto ns = static_cast<std::int64_t>(s.size()), ng = static_cast<std::int64_t>(g.size());
  o.precision = ns == 0 ? Fraction{0, 1} : Fraction{hit, ns};
  o.recall = {hit, ng};
  o.f1 = ns == 0 ? Fraction{0, 1} : Fraction{2 * hit, ns + ng};
  return o;
}

OracleRates oracle_rates(const std::vector<OutcomeLabel>& labels) {
  OracleRates r;
  for (const auto& l : labels) {
    ++r.q;
    if (l.outcome == Outcome::kCorrect) ++r.c;
    if (l.outcome == Outcome::kIncorrect) ++r.i;
    if (l.outcome == Outcome::kError) {
      ++r.e;
      ++r.breakdown[static_cast<int>(l.category)];
    }
  }
  return r;
}

Fraction oracle_pass_at_k(const std::vector<std::vector<OutcomeLabel>>& rows, std::size_t k) {
  std::int64_t hits = 0;
  for (const auto& row : rows) {
    bool any = false;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j + 1 <= k && row[j].outcome == Outcome::kCorrect) any = true;
    }
    hits += any;
  }
  return {hits, static_cast<std::int64_t>(rows.size())};
}

OracleRevision oracle_revision(const std::vector<OutcomeLabel>& pre, const std::vector<OutcomeLabel>& post) {
  std::int64_t n[3] = {0, 0, 0};
  std::int64_t flow[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  std::int64_t c_post = 0;
  for (std::size_t q = 0; q < pre.size(); ++q) {
    const int a = static_cast<int>(pre[q].outcome), b = static_cast<int>(post[q].outcome);
    ++n[a];
    ++flow[a][b];
    c_post += post[q].outcome == Outcome::kCorrect;
  }
  const int C = static_cast<int>(Outcome::kCorrect), I = static_cast<int>(Outcome::kIncorrect),
            E = static_cast<int>(Outcome::kError);
  auto frac = [](std::int64_t num, std::int64_t den) -> std::optional<Fraction> {
    if (den == 0) return std::nullopt;
    return Fraction{num, den};
  };
  OracleRevision r;
  // CR ratio with |Q| cancelled: (|C_post| - |C_pre|) / |C_pre|.
  r.ci = frac(c_post - n[C], n[C]);
  r.i2c = frac(flow[I][C], n[I]);
  r.e2c = frac(flow[E][C], n[E]);
  r.c2i = frac(flow[C][I], n[C]);
  r.c2e = frac(flow[C][E], n[C]);
  return r;
}

OutcomeLabel random_label(std::mt19937_64& rng) {
  const auto v = rng() % 7;
  if (v < 3) return OutcomeLabel::correct();
  if (v < 5) return OutcomeLabel::incorrect();
  return OutcomeLabel::error(kAllErrorCategories[rng() % 5]);
}

// ---------------------------------------------------------------------------

namespace {

const std::map<std::string, std::vector<std::string>>& generator_tables() {
  static const std::map<std::string, std::vector<std::string>> kTables = {
      {"cards", {"id", "name", "type", "rarity", "power", "uuid", "setcode"}},
      {"sets", {"id", "code", "name", "releasedate", "totalsetsize"}},
      {"foreign_data", {"id", "uuid", "language", "name", "flavortext"}},
      {"rulings", {"id", "uuid", "date", "text"}},
  };
  return kTables;
}

struct Edge {
  std::string a, a_col, b, b_col;
};

const std::vector<Edge>& edges() {
  static const std::vector<Edge> kEdges = {
      {"cards", "uuid", "foreign_data", "uuid"},
      {"cards", "uuid", "rulings", "uuid"},
      {"cards", "setcode", "sets", "code"},
      {"foreign_data", "uuid", "rulings", "uuid"},
  };
  return kEdges;
}

std::string spell(std::mt19937_64& rng, const std::string& name) {
  std::string s = name;
  switch (rng() % 6) {
    case 0:
      std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
      return s;
    case 1: s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0]))); return s;
    case 2: return "\"" + s + "\"";
    case 3: return "`" + s + "`";
    case 4: return "[" + s + "]";
    default: return s;
  }
}

struct ScopeTable {
  std::string table;
  std::string qualifier;  // alias or table name
};

class QueryBuilder {
 public:
  explicit QueryBuilder(std::mt19937_64& rng) : rng_(rng) {}

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  ScopeTable bind(const std::string& table, std::string& from_text) {
    static const char* kAliases[] = {"a", "b", "c", "t1", "t2", "x", "y", "z", "s1", "s2"};
    ScopeTable st{table, table};
    const auto mode = pick(3);
    if (mode == 0) {
      from_text = spell(rng_, table);
    } else {
      std::string alias;
      do {
        alias = kAliases[pick(std::size(kAliases))];
      } while (used_aliases_.count(alias));
      used_aliases_.insert(alias);
      st.qualifier = alias;
      from_text = spell(rng_, table) + (mode == 1 ? " AS " : " ") + alias;
    }
    return st;
  }

  // A column reference within `scope`, qualified unless unambiguous there.
  std::string ref(const std::vector<ScopeTable>& scope, std::size_t which, const std::string& column,
                  SchemaSet& expected, bool allow_bare = true) {
    expected.add_column(scope[which].table, column);
    std::size_t owners = 0;
    for (const auto& st : scope) {
      const auto& cols = generator_tables().at(st.table);
      owners += std::count(cols.begin(), cols.end(), column);
    }
    if (allow_bare && owners == 1 && pick(3) == 0) return spell(rng_, column);
    return scope[which].qualifier + "." + spell(rng_, column);
  }

  std::string random_ref(const std::vector<ScopeTable>& scope, SchemaSet& expected, bool allow_bare = true) {
    const auto which = pick(scope.size());
    const auto& cols = generator_tables().at(scope[which].table);
    return ref(scope, which, cols[pick(cols.size())], expected, allow_bare);
  }

  std::string predicate(const std::vector<ScopeTable>& scope, SchemaSet& expected) {
    const std::string col = random_ref(scope, expected);
    switch (pick(5)) {
      case 0: return col + " > " + std::to_string(pick(100));
      case 1: return col + " = 'v" + std::to_string(pick(10)) + "'";
      case 2: return col + " IS NOT NULL";
      case 3: return col + " BETWEEN 1 AND " + std::to_string(2 + pick(50));
      default: return col + " LIKE '%" + std::to_string(pick(9)) + "%'";
    }
  }

  // FROM clause over `count` tables connected by join edges.
  std::string from_clause(std::size_t count, std::vector<ScopeTable>& scope, SchemaSet& expected) {
    std::string text;
    std::vector<std::string> tables;
    if (count == 1) {
      const auto& all = generator_tables();
      auto it = all.begin();
      std::advance(it, static_cast<long>(pick(all.size())));
      std::string bound;
      scope.push_back(bind(it->first, bound));
      expected.add_table(it->first);
      return bound;
    }
    const Edge& first = edges()[pick(edges().size())];
    std::string left_text, right_text;
    scope.push_back(bind(first.a, left_text));
    scope.push_back(bind(first.b, right_text));
    expected.add_table(first.a);
    expected.add_table(first.b);
    text = left_text + join_word() + right_text + " ON " + ref(scope, 0, first.a_col, expected, false) + " = " +
           ref(scope, 1, first.b_col, expected, false);
    if (count == 3) {
      std::vector<const Edge*> options;
      for (const auto& e : edges()) {
        const bool has_a = in_scope(scope, e.a), has_b = in_scope(scope, e.b);
        if (has_a != has_b) options.push_back(&e);
      }
      const Edge& e = *options[pick(options.size())];
      const bool forward = in_scope(scope, e.a);
      const std::string& known = forward ? e.a : e.b;
      const std::string& known_col = forward ? e.a_col : e.b_col;
      const std::string& fresh = forward ? e.b : e.a;
      const std::string& fresh_col = forward ? e.b_col : e.a_col;
      std::string bound;
      scope.push_back(bind(fresh, bound));
      expected.add_table(fresh);
      std::size_t known_idx = 0;
      while (scope[known_idx].table != known) ++known_idx;
      text += join_word() + bound + " ON " + ref(scope, known_idx, known_col, expected, false) + " = " +
              ref(scope, scope.size() - 1, fresh_col, expected, false);
    }
    return text;
  }

  void reset_aliases() { used_aliases_.clear(); }

 private:
  static bool in_scope(const std::vector<ScopeTable>& scope, const std::string& t) {
    return std::any_of(scope.begin(), scope.end(), [&](const ScopeTable& s) { return s.table == t; });
  }

  std::string join_word() {
    switch (pick(4)) {
      case 0: return " JOIN ";
      case 1: return " INNER JOIN ";
      case 2: return " LEFT JOIN ";
      default: return " LEFT OUTER JOIN ";
    }
  }

  std::mt19937_64& rng_;
  std::set<std::string> used_aliases_;
};

}  // namespace

Catalog generator_catalog() {
  Catalog c;
  for (const auto& [t, cols] : generator_tables()) c.add_table(t, cols);
  return c;
}

GeneratedQuery generate_query(std::mt19937_64& rng) {
  QueryBuilder b(rng);
  GeneratedQuery g;
  SchemaSet& exp = g.expected;
  std::vector<ScopeTable> scope;
  const auto shape = b.pick(6);
  std::string sql;
  switch (shape) {
    case 0: {  // filter
      g.shape = "filter";
      const std::string from = b.from_clause(1, scope, exp);
      sql = "SELECT " + b.random_ref(scope, exp) + ", " + b.random_ref(scope, exp) + " FROM " + from + " WHERE " +
            b.predicate(scope, exp);
      if (b.pick(2)) sql += " AND " + b.predicate(scope, exp);
      if (b.pick(2)) sql += " ORDER BY " + b.random_ref(scope, exp) + (b.pick(2) ? " DESC" : "");
      if (b.pick(2)) sql += " LIMIT " + std::to_string(1 + b.pick(20));
      break;
    }
    case 1:
    case 2: {  // 2- or 3-way join
      g.shape = shape == 1 ? "join2" : "join3";
      const std::string from = b.from_clause(shape == 1 ? 2 : 3, scope, exp);
      std::string select;
      for (std::size_t k = 0; k < 2 + b.pick(2); ++k) select += (k ? ", " : "") + b.random_ref(scope, exp);
      sql = "SELECT " + select + " FROM " + from;
      if (b.pick(3)) sql += " WHERE " + b.predicate(scope, exp);
      break;
    }
    case 3: {  // IN / scalar subquery
      g.shape = "subquery";
      const std::string from = b.from_clause(1 + b.pick(2), scope, exp);
      std::vector<ScopeTable> inner;
      const std::string inner_from = b.from_clause(1, inner, exp);
      const std::string inner_col = b.random_ref(inner, exp);
      const std::string inner_pred = b.predicate(inner, exp);
      const std::string outer_col = b.random_ref(scope, exp, false);
      if (b.pick(2)) {
        sql = "SELECT " + b.random_ref(scope, exp, false) + " FROM " + from + " WHERE " + outer_col + " IN (SELECT " +
              inner_col + " FROM " + inner_from + " WHERE " + inner_pred + ")";
      } else {
        sql = "SELECT " + outer_col + ", (SELECT MAX(" + inner_col + ") FROM " + inner_from + " WHERE " + inner_pred +
              ") AS top_value FROM " + from;
      }
      break;
    }
    case 4: {  // derived table
      g.shape = "derived";
      std::vector<ScopeTable> inner;
      const std::string inner_from = b.from_clause(1 + b.pick(2), inner, exp);
      const std::string c1 = b.random_ref(inner, exp);
      const std::string c2 = b.random_ref(inner, exp);
      sql = "SELECT sub.first_value FROM (SELECT " + c1 + " AS first_value, " + c2 + " AS second_value FROM " +
            inner_from + " WHERE " + b.predicate(inner, exp) + ") AS sub WHERE sub.second_value IS NOT NULL";
      break;
    }
    default: {  // GROUP BY / HAVING / ORDER BY
      g.shape = "group";
      const std::string from = b.from_clause(1 + b.pick(2), scope, exp);
      const std::string key = b.random_ref(scope, exp);
      const std::string counted = b.random_ref(scope, exp);
      sql = "SELECT " + key + ", COUNT(" + counted + ") AS cnt FROM " + from;
      if (b.pick(2)) sql += " WHERE " + b.predicate(scope, exp);
      sql += " GROUP BY " + key + " HAVING COUNT(*) > " + std::to_string(b.pick(5));
      sql += b.pick(2) ? " ORDER BY cnt DESC" : " ORDER BY " + b.random_ref(scope, exp);
      break;
    }
  }
  g.sql = sql;
  return g;
}

// ---------------------------------------------------------------------------

std::vector<Json> mock_profile_matrix() {
  auto cg = [](const char* c, const char* i, const char* e) { return Json{{"correct", c}, {"incorrect", i}, {"error", e}}; };
  return {
      {{"name", "all_correct"}, {"seed", 1}, {"candidate_generation", cg("1", "0", "0")}},
      {{"name", "error_only"}, {"seed", 2}, {"questions", 20}, {"candidate_generation", cg("0", "0", "1")}},
      {{"name", "mixed_five_errors"},
       {"seed", 3},
       {"questions", 20},
       {"candidate_generation", cg("0.5", "0.25", "0.25")}},
      {{"name", "spec_mixed"}, {"seed", 4}, {"questions", 20}, {"candidate_generation", cg("0.6", "0.3", "0.1")}},
      {{"name", "all_incorrect"}, {"seed", 5}, {"questions", 10}, {"candidate_generation", cg("0", "1", "0")}},
      {{"name", "multi_candidate"},
       {"seed", 6},
       {"questions", 20},
       {"candidates", 5},
       {"rescue", "0.25"},
       {"candidate_generation", cg("0.4", "0.4", "0.2")}},
      {{"name", "revision"},
       {"seed", 7},
       {"questions", 20},
       {"candidate_generation", cg("0.6", "0.2", "0.2")},
       {"query_revision", {{"i2c", "0.5"}, {"e2c", "0.5"}, {"c2i", "1/6"}, {"c2e", "1/12"}}}},
      {{"name", "revision_no_errors"},
       {"seed", 8},
       {"questions", 20},
       {"candidate_generation", cg("0.5", "0.5", "0")},
       {"query_revision", {{"i2c", "0.2"}, {"e2c", "0"}, {"c2i", "0.1"}, {"c2e", "0"}}}},
      {{"name", "schema_noise"},
       {"seed", 9},
       {"questions", 20},
       {"candidate_generation", cg("0.75", "0.15", "0.1")},
       {"schema_selection", {{"drop_column", "0.25"}, {"add_spurious", "0.3"}}}},
      {{"name", "full_stack"},
       {"seed", 10},
       {"questions", 20},
       {"candidates", 3},
       {"rescue", "0.1"},
       {"candidate_generation", cg("0.5", "0.25", "0.25")},
       {"query_revision", {{"i2c", "0.6"}, {"e2c", "0.4"}, {"c2i", "0.1"}, {"c2e", "0.1"}}},
       {"schema_selection", {{"drop_column", "0.5"}, {"add_spurious", "0.1"}}}},
      {{"name", "syntax_and_timeout"},
       {"seed", 11},
       {"questions", 10},
       {"error_categories", {"syntax_error", "timeout"}},
       {"candidate_generation", cg("0.2", "0.2", "0.6")}},
  };
}

}  // namespace sqlharness::testing
