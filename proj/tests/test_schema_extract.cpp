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

#include <gtest/gtest.h>

#include <random>

#include "sqlharness/schema_extract.hpp"
#include "sqlharness/sql_lexer.hpp"
#include "sqlharness/sql_parser.hpp"
#include "support/test_support.hpp"

namespace sqlharness {
namespace {

Catalog cards_catalog() {
  Catalog c;
  c.add_table("cards", {"id", "name", "type", "toughness", "watermark", "uuid", "setcode"});
  c.add_table("foreign_data", {"id", "uuid", "language", "name"});
  c.add_table("sets", {"id", "code", "name"});
  return c;
}

SchemaSet schema(const char* json) { return schema_from_json(Json::parse(json)); }

ExtractionResult extract(const std::string& sql, ExtractOptions o = {}) {
  return extract_schema(sql, cards_catalog(), o);
}

TEST(Extract, CountExample) {
  EXPECT_EQ(extract("SELECT COUNT(id) FROM cards WHERE toughness = 99").schema,
            schema(R"({"cards": ["id", "toughness"]})"));
}

TEST(Extract, AliasedJoinExample) {
  const auto r = extract(
      "SELECT DISTINCT T1.name, T1.type FROM cards AS T1 INNER JOIN foreign_data AS T2 ON T2.uuid = T1.uuid "
      "WHERE T1.watermark = 'abzan'");
  EXPECT_EQ(r.schema, schema(R"({"cards": ["name", "type", "uuid", "watermark"], "foreign_data": ["uuid"]})"));
  EXPECT_TRUE(r.unresolved.empty());
}

TEST(Extract, NoTables) { EXPECT_TRUE(extract("SELECT 1").schema.empty()); }

TEST(Extract, StarIsTableLevelUnlessExpanded) {
  EXPECT_EQ(extract("SELECT * FROM sets").schema, schema(R"({"sets": []})"));
  EXPECT_EQ(extract("SELECT s.* FROM sets s").schema, schema(R"({"sets": []})"));
  EXPECT_EQ(extract("SELECT * FROM sets", {true}).schema, schema(R"({"sets": ["id", "code", "name"]})"));
}

TEST(Extract, CteNamesAreNotTables) {
  const auto r = extract(
      "WITH big AS (SELECT setcode, COUNT(*) AS n FROM cards GROUP BY setcode) "
      "SELECT s.name, big.n FROM big JOIN sets s ON s.code = big.setcode ORDER BY big.n DESC");
  EXPECT_EQ(r.schema, schema(R"({"cards": ["setcode"], "sets": ["code", "name"]})"));
  EXPECT_TRUE(r.unresolved.empty());
}

TEST(Extract, RecursiveCte) {
  const auto r = extract(
      "WITH RECURSIVE cnt(x) AS (SELECT 1 UNION ALL SELECT x + 1 FROM cnt WHERE x < 5) "
      "SELECT x FROM cnt JOIN cards ON cards.id = cnt.x");
  EXPECT_EQ(r.schema, schema(R"({"cards": ["id"]})"));
}

TEST(Extract, SubqueriesAndCorrelation) {
  const auto r = extract(
      "SELECT name FROM sets WHERE EXISTS (SELECT 1 FROM cards c WHERE c.setcode = sets.code AND toughness > 3)");
  EXPECT_EQ(r.schema, schema(R"({"cards": ["setcode", "toughness"], "sets": ["code", "name"]})"));
  const auto d = extract("SELECT sub.n FROM (SELECT COUNT(*) AS n, type FROM cards GROUP BY type) AS sub WHERE sub.type = 'x'");
  EXPECT_EQ(d.schema, schema(R"({"cards": ["type"]})"));
}

TEST(Extract, OrderByAliasAndHaving) {
  const auto r = extract(
      "SELECT type, COUNT(id) AS total FROM cards GROUP BY type HAVING COUNT(id) > 2 ORDER BY total DESC");
  EXPECT_EQ(r.schema, schema(R"({"cards": ["id", "type"]})"));
}

TEST(Extract, AmbiguousAttributedToFirstTable) {
  const auto r = extract("SELECT name FROM cards, foreign_data");
  EXPECT_EQ(r.schema.entries().at("cards"), (std::set<std::string>{"name"}));
  EXPECT_FALSE(r.ambiguous.empty());
}

TEST(Extract, UsingColumnsOnBothTables) {
  const auto r = extract("SELECT language FROM cards JOIN foreign_data USING (uuid)");
  EXPECT_EQ(r.schema, schema(R"({"cards": ["uuid"], "foreign_data": ["language", "uuid"]})"));
}

TEST(Extract, UnresolvedReportedAndContinues) {
  const auto r = extract("SELECT nmae, c.id, missing.x FROM cards c WHERE zz = 1");
  EXPECT_EQ(r.schema.entries().at("cards"), (std::set<std::string>{"id"}));
  EXPECT_EQ(r.unresolved.size(), 3u);
  const auto t = extract("SELECT * FROM nonexistent");
  EXPECT_EQ(t.unresolved, (std::vector<std::string>{"table nonexistent"}));
}

TEST(Extract, QuotingAndCaseNormalize) {
  EXPECT_EQ(extract("SELECT \"Name\", [TYPE], `uuid` FROM \"CARDS\"").schema,
            schema(R"({"cards": ["name", "type", "uuid"]})"));
  // A double-quoted token naming no column behaves as a string literal.
  const auto r = extract("SELECT id FROM cards WHERE name = \"abzan\"");
  EXPECT_EQ(r.schema, schema(R"({"cards": ["id", "name"]})"));
  EXPECT_TRUE(r.unresolved.empty());
}

TEST(Extract, CompoundSelectsAndRowid) {
  const auto r = extract("SELECT id FROM cards WHERE rowid < 3 UNION SELECT id FROM sets ORDER BY 1");
  EXPECT_EQ(r.schema, schema(R"({"cards": ["id"], "sets": ["id"]})"));
}

TEST(Extract, WindowsCaseCastAndFunctions) {
  const auto r = extract(
      "SELECT CAST(toughness AS INTEGER), CASE WHEN type = 'a' THEN 1 ELSE 0 END, "
      "ROW_NUMBER() OVER (PARTITION BY setcode ORDER BY id) FROM cards WHERE name LIKE 'x%' "
      "AND id BETWEEN 1 AND 4 AND uuid IN ('a', 'b')");
  EXPECT_EQ(r.schema, schema(R"({"cards": ["id", "name", "setcode", "toughness", "type", "uuid"]})"));
}

TEST(Extract, ParseErrorsCarryMessage) {
  try {
    extract("SELECT FROM WHERE");
    FAIL() << "expected an error";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("syntax error"), std::string::npos) << e.what();
  }
  EXPECT_THROW(extract("SELECT 1; SELECT 2"), std::exception);
  EXPECT_THROW(extract("SELECT 'unterminated"), std::exception);
}

TEST(Extract, GeneratedQueriesMatchGroundTruth) {
  std::mt19937_64 rng(2024);
  const auto catalog = testing::generator_catalog();
  for (int i = 0; i < 300; ++i) {
    const auto g = testing::generate_query(rng);
    const auto r = extract_schema(g.sql, catalog);
    EXPECT_EQ(r.schema, g.expected) << g.shape << ": " << g.sql << "\n got " << to_json(r.schema).dump()
                                    << "\n want " << to_json(g.expected).dump();
    EXPECT_TRUE(r.unresolved.empty()) << g.sql;
  }
}

TEST(Lexer, CommentsAndLiterals) {
  const auto t = sql::tokenize("SELECT -- note\n x'ab', 'it''s', ?1 /* c */ FROM t");
  std::vector<sql::TokenKind> kinds;
  for (const auto& tok : t) kinds.push_back(tok.kind);
  EXPECT_EQ(kinds, (std::vector<sql::TokenKind>{sql::TokenKind::kWord, sql::TokenKind::kBlob, sql::TokenKind::kPunct,
                                                sql::TokenKind::kString, sql::TokenKind::kPunct,
                                                sql::TokenKind::kParameter, sql::TokenKind::kWord,
                                                sql::TokenKind::kWord, sql::TokenKind::kEnd}));
}

}  // namespace
}  // namespace sqlharness
