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

#include "sqlharness/sql_parser.hpp"

#include <set>
#include <string>

#include "sqlharness/model.hpp"

namespace sqlharness::sql {

namespace {

// Words that can never be a bare column name in expression position.
const std::set<std::string, std::less<>> kNotPrimary = {
    "ALL",    "AND",   "AS",      "BETWEEN",   "BY",    "COLLATE", "CROSS",   "DISTINCT", "ELSE",
    "END",    "ESCAPE", "EXCEPT", "FROM",      "FULL",  "GLOB",    "GROUP",   "HAVING",   "IN",
    "INDEXED", "INNER", "INTERSECT", "IS",     "ISNULL", "JOIN",   "LEFT",    "LIKE",     "LIMIT",
    "MATCH",  "NATURAL", "NOTNULL", "OFFSET",  "ON",    "OR",      "ORDER",   "OUTER",    "REGEXP",
    "RIGHT",  "SELECT", "THEN",    "UNION",    "USING", "VALUES",  "WHEN",    "WHERE",    "WINDOW",
    "WITH"};

// Words that terminate an expression or table instead of acting as an
// implicit alias.
const std::set<std::string, std::less<>> kNotAlias = {
    "ALL",    "AND",     "AS",      "ASC",     "BETWEEN", "BY",     "CASE",    "CAST",    "COLLATE",
    "CROSS",  "DESC",    "DISTINCT", "ELSE",   "END",     "ESCAPE", "EXCEPT",  "EXISTS",  "FILTER",
    "FROM",   "FULL",    "GLOB",    "GROUP",   "HAVING",  "IN",     "INDEXED", "INNER",   "INTERSECT",
    "IS",     "ISNULL",  "JOIN",    "LEFT",    "LIKE",    "LIMIT",  "MATCH",   "NATURAL", "NOT",
    "NOTNULL", "NULL",   "NULLS",   "OFFSET",  "ON",      "OR",     "ORDER",   "OUTER",   "OVER",
    "REGEXP", "RIGHT",   "SELECT",  "THEN",    "UNION",   "USING",  "VALUES",  "WHEN",    "WHERE",
    "WINDOW", "WITH"};

class Parser {
 public:
  explicit Parser(std::string_view sql) : tokens_(tokenize(sql)) {}

  SelectPtr parse_statement() {
    SelectPtr select = parse_select_body();
    if (peek().is_punct(";")) advance();
    if (peek().kind != TokenKind::kEnd) {
      if (previous_was_semicolon()) throw ParseError("multiple statements are not supported", peek().offset);
      syntax_error();
    }
    return select;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& advance() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool previous_was_semicolon() const { return pos_ > 0 && tokens_[pos_ - 1].is_punct(";"); }

  [[noreturn]] void syntax_error() const {
    const Token& t = peek();
    if (t.kind == TokenKind::kEnd) throw ParseError("incomplete input", t.offset);
    throw ParseError("near \"" + t.text + "\": syntax error", t.offset);
  }

  bool accept_word(std::string_view kw) {
    if (peek().is_word(kw)) {
      advance();
      return true;
    }
    return false;
  }
  bool accept_punct(std::string_view p) {
    if (peek().is_punct(p)) {
      advance();
      return true;
    }
    return false;
  }
  void expect_word(std::string_view kw) {
    if (!accept_word(kw)) syntax_error();
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) syntax_error();
  }

  static Ident make_ident(const Token& t) {
    Ident id;
    try {
      id.name = normalize_identifier(t.text);
    } catch (const ValidationError&) {
      throw ParseError("empty identifier", t.offset);
    }
    id.double_quoted = t.kind == TokenKind::kDoubleQuoted;
    return id;
  }

  Ident expect_ident() {
    const Token& t = peek();
    if (!t.is_identifier_like()) syntax_error();
    if (t.kind == TokenKind::kWord && kNotPrimary.count(t.upper)) syntax_error();
    return make_ident(advance());
  }

  bool at_select_start() const {
    return peek().is_word("SELECT") || peek().is_word("WITH") || peek().is_word("VALUES");
  }

  std::optional<std::string> parse_alias(bool allow_string) {
    if (accept_word("AS")) {
      const Token& t = peek();
      if (t.is_identifier_like() || t.kind == TokenKind::kString) return make_ident(advance()).name;
      syntax_error();
    }
    const Token& t = peek();
    if (t.kind == TokenKind::kWord && !kNotAlias.count(t.upper)) return make_ident(advance()).name;
    if (t.kind == TokenKind::kQuotedIdent || t.kind == TokenKind::kDoubleQuoted) return make_ident(advance()).name;
    if (allow_string && t.kind == TokenKind::kString) return make_ident(advance()).name;
    return std::nullopt;
  }

  // ---- statements -------------------------------------------------------

  SelectPtr parse_select_body() {
    auto select = std::make_unique<Select>();
    if (accept_word("WITH")) {
      select->recursive = accept_word("RECURSIVE");
      do {
        Cte cte;
        cte.name = expect_ident();
        if (accept_punct("(")) {
          do {
            cte.columns.push_back(expect_ident());
          } while (accept_punct(","));
          expect_punct(")");
        }
        expect_word("AS");
        if (accept_word("NOT")) {
          expect_word("MATERIALIZED");
        } else {
          accept_word("MATERIALIZED");
        }
        expect_punct("(");
        cte.select = parse_select_body();
        expect_punct(")");
        select->ctes.push_back(std::move(cte));
      } while (accept_punct(","));
    }
    select->cores.push_back(parse_core());
    while (true) {
      const Token& t = peek();
      std::string op;
      if (t.is_word("UNION")) {
        advance();
        op = accept_word("ALL") ? "UNION ALL" : "UNION";
      } else if (t.is_word("INTERSECT")) {
        advance();
        op = "INTERSECT";
      } else if (t.is_word("EXCEPT")) {
        advance();
        op = "EXCEPT";
      } else {
        break;
      }
      select->compound_ops.push_back(op);
      select->cores.push_back(parse_core());
    }
    if (accept_word("ORDER")) {
      expect_word("BY");
      select->order_by = parse_ordering_terms();
    }
    if (accept_word("LIMIT")) {
      select->limit = parse_expr();
      if (accept_word("OFFSET") || accept_punct(",")) select->offset = parse_expr();
    }
    return select;
  }

  std::vector<OrderingTerm> parse_ordering_terms() {
    std::vector<OrderingTerm> terms;
    do {
      OrderingTerm term;
      term.expr = parse_expr();
      if (accept_word("DESC")) {
        term.descending = true;
      } else {
        accept_word("ASC");
      }
      if (accept_word("NULLS")) {
        if (!accept_word("FIRST")) expect_word("LAST");
      }
      terms.push_back(std::move(term));
    } while (accept_punct(","));
    return terms;
  }

  SelectCore parse_core() {
    SelectCore core;
    if (accept_word("VALUES")) {
      core.is_values = true;
      do {
        expect_punct("(");
        std::vector<ExprPtr> row;
        do {
          row.push_back(parse_expr());
        } while (accept_punct(","));
        expect_punct(")");
        core.values.push_back(std::move(row));
      } while (accept_punct(","));
      return core;
    }
    expect_word("SELECT");
    if (accept_word("DISTINCT")) {
      core.distinct = true;
    } else {
      accept_word("ALL");
    }
    do {
      core.columns.push_back(parse_result_column());
    } while (accept_punct(","));
    if (accept_word("FROM")) core.from = parse_join_clause();
    if (accept_word("WHERE")) core.where = parse_expr();
    if (accept_word("GROUP")) {
      expect_word("BY");
      do {
        core.group_by.push_back(parse_expr());
      } while (accept_punct(","));
    }
    if (accept_word("HAVING")) core.having = parse_expr();
    if (accept_word("WINDOW")) {
      do {
        WindowDef def;
        def.name = expect_ident().name;
        expect_word("AS");
        expect_punct("(");
        std::optional<std::string> base;
        parse_window_body(def.partition, def.order, base);
        core.windows.push_back(std::move(def));
      } while (accept_punct(","));
    }
    return core;
  }

  ResultColumn parse_result_column() {
    ResultColumn col;
    if (accept_punct("*")) {
      col.kind = ResultColumn::Kind::kStar;
      return col;
    }
    // table.* or schema.table.*
    if (peek().is_identifier_like() && peek(1).is_punct(".")) {
      if (peek(2).is_punct("*")) {
        col.kind = ResultColumn::Kind::kTableStar;
        col.table.push_back(make_ident(advance()));
        advance();
        advance();
        return col;
      }
      if (peek(2).is_identifier_like() && peek(3).is_punct(".") && peek(4).is_punct("*")) {
        col.kind = ResultColumn::Kind::kTableStar;
        col.table.push_back(make_ident(advance()));
        advance();
        col.table.push_back(make_ident(advance()));
        advance();
        advance();
        return col;
      }
    }
    col.expr = parse_expr();
    col.alias = parse_alias(/*allow_string=*/true);
    return col;
  }

  std::vector<JoinItem> parse_join_clause() {
    std::vector<JoinItem> items;
    JoinItem first;
    first.source = parse_table_or_subquery();
    items.push_back(std::move(first));
    while (true) {
      JoinItem item;
      if (accept_punct(",")) {
        item.op = ",";
      } else {
        std::string op;
        if (accept_word("NATURAL")) item.natural = true;
        if (accept_word("LEFT")) {
          op = "LEFT";
          accept_word("OUTER");
        } else if (accept_word("RIGHT")) {
          op = "RIGHT";
          accept_word("OUTER");
        } else if (accept_word("FULL")) {
          op = "FULL";
          accept_word("OUTER");
        } else if (accept_word("INNER")) {
          op = "INNER";
        } else if (accept_word("CROSS")) {
          op = "CROSS";
        }
        if (!peek().is_word("JOIN")) {
          if (item.natural || !op.empty()) syntax_error();
          break;
        }
        advance();
        item.op = op.empty() ? "JOIN" : op + " JOIN";
      }
      item.source = parse_table_or_subquery();
      if (accept_word("ON")) {
        item.on = parse_expr();
      } else if (accept_word("USING")) {
        expect_punct("(");
        do {
          item.using_columns.push_back(expect_ident());
        } while (accept_punct(","));
        expect_punct(")");
      }
      items.push_back(std::move(item));
    }
    return items;
  }

  TableSource parse_table_or_subquery() {
    TableSource src;
    if (accept_punct("(")) {
      if (at_select_start()) {
        src.kind = TableSource::Kind::kSubquery;
        src.subquery = parse_select_body();
        expect_punct(")");
        src.alias = parse_alias(false);
        return src;
      }
      src.kind = TableSource::Kind::kJoinGroup;
      src.group = parse_join_clause();
      expect_punct(")");
      src.alias = parse_alias(false);
      return src;
    }
    src.kind = TableSource::Kind::kTable;
    src.name.push_back(expect_ident());
    if (accept_punct(".")) src.name.push_back(expect_ident());
    if (accept_punct("(")) {
      src.kind = TableSource::Kind::kTableFunction;
      if (!peek().is_punct(")")) {
        do {
          src.function_args.push_back(parse_expr());
        } while (accept_punct(","));
      }
      expect_punct(")");
    }
    src.alias = parse_alias(false);
    if (accept_word("INDEXED")) {
      expect_word("BY");
      expect_ident();
    } else if (peek().is_word("NOT") && peek(1).is_word("INDEXED")) {
      advance();
      advance();
    }
    return src;
  }

  // After "(" of a window specification; consumes the closing ")".
  void parse_window_body(std::vector<ExprPtr>& partition, std::vector<ExprPtr>& order,
                         std::optional<std::string>& base) {
    if (peek().kind == TokenKind::kWord && !peek().is_word("PARTITION") && !peek().is_word("ORDER") &&
        !peek().is_word("ROWS") && !peek().is_word("RANGE") && !peek().is_word("GROUPS")) {
      base = expect_ident().name;
    }
    if (accept_word("PARTITION")) {
      expect_word("BY");
      do {
        partition.push_back(parse_expr());
      } while (accept_punct(","));
    }
    if (accept_word("ORDER")) {
      expect_word("BY");
      for (auto& term : parse_ordering_terms()) order.push_back(std::move(term.expr));
    }
    // Frame specification: bounds are constants, skip to the closing paren.
    int depth = 0;
    while (true) {
      const Token& t = peek();
      if (t.kind == TokenKind::kEnd) syntax_error();
      if (t.is_punct("(")) ++depth;
      if (t.is_punct(")")) {
        if (depth == 0) break;
        --depth;
      }
      advance();
    }
    expect_punct(")");
  }

  // ---- expressions ------------------------------------------------------

  static ExprPtr make(ExprKind kind, std::string text = {}) {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->text = std::move(text);
    return e;
  }
  static ExprPtr binary(std::string op, ExprPtr lhs, ExprPtr rhs) {
    auto e = make(ExprKind::kBinary, std::move(op));
    e->args.push_back(std::move(lhs));
    e->args.push_back(std::move(rhs));
    return e;
  }
  static ExprPtr unary(std::string op, ExprPtr operand) {
    auto e = make(ExprKind::kUnary, std::move(op));
    e->args.push_back(std::move(operand));
    return e;
  }

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (accept_word("OR")) lhs = binary("OR", std::move(lhs), parse_and());
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (accept_word("AND")) lhs = binary("AND", std::move(lhs), parse_not());
    return lhs;
  }

  ExprPtr parse_not() {
    if (peek().is_word("NOT") && !peek(1).is_word("EXISTS")) {
      advance();
      return unary("NOT", parse_not());
    }
    return parse_equality();
  }

  ExprPtr parse_equality() {
    ExprPtr lhs = parse_comparison();
    while (true) {
      const Token& t = peek();
      if (t.is_punct("=") || t.is_punct("==") || t.is_punct("!=") || t.is_punct("<>")) {
        std::string op = advance().upper;
        lhs = binary(op, std::move(lhs), parse_comparison());
        continue;
      }
      if (t.is_word("IS")) {
        advance();
        std::string op = "IS";
        if (accept_word("NOT")) op = "IS NOT";
        if (accept_word("DISTINCT")) {
          expect_word("FROM");
          op += " DISTINCT FROM";
        }
        lhs = binary(op, std::move(lhs), parse_comparison());
        continue;
      }
      if (t.is_word("ISNULL") || t.is_word("NOTNULL")) {
        lhs = unary(advance().upper, std::move(lhs));
        continue;
      }
      bool negated = false;
      if (t.is_word("NOT")) {
        const Token& next = peek(1);
        if (next.is_word("NULL")) {
          advance();
          advance();
          lhs = unary("NOTNULL", std::move(lhs));
          continue;
        }
        if (!(next.is_word("IN") || next.is_word("LIKE") || next.is_word("GLOB") || next.is_word("REGEXP") ||
              next.is_word("MATCH") || next.is_word("BETWEEN"))) {
          break;
        }
        advance();
        negated = true;
      }
      const Token& kw = peek();
      if (kw.is_word("IN")) {
        advance();
        lhs = parse_in_rhs(std::move(lhs), negated);
      } else if (kw.is_word("LIKE") || kw.is_word("GLOB") || kw.is_word("REGEXP") || kw.is_word("MATCH")) {
        std::string op = advance().upper;
        if (negated) op = "NOT " + op;
        lhs = binary(op, std::move(lhs), parse_comparison());
        if (accept_word("ESCAPE")) lhs->args.push_back(parse_comparison());
      } else if (kw.is_word("BETWEEN")) {
        advance();
        auto e = make(ExprKind::kBetween);
        e->flag = negated;
        e->args.push_back(std::move(lhs));
        e->args.push_back(parse_comparison());
        expect_word("AND");
        e->args.push_back(parse_comparison());
        lhs = std::move(e);
      } else if (negated) {
        syntax_error();
      } else {
        break;
      }
    }
    return lhs;
  }

  ExprPtr parse_in_rhs(ExprPtr lhs, bool negated) {
    auto e = make(ExprKind::kIn);
    e->flag = negated;
    e->args.push_back(std::move(lhs));
    if (accept_punct("(")) {
      if (at_select_start()) {
        e->subquery = parse_select_body();
      } else if (!peek().is_punct(")")) {
        do {
          e->args.push_back(parse_expr());
        } while (accept_punct(","));
      }
      expect_punct(")");
      return e;
    }
    e->in_table.push_back(expect_ident());
    if (accept_punct(".")) e->in_table.push_back(expect_ident());
    if (accept_punct("(")) {
      // table-valued function: arguments are expressions in scope
      if (!peek().is_punct(")")) {
        do {
          e->args.push_back(parse_expr());
        } while (accept_punct(","));
      }
      expect_punct(")");
      e->in_table.clear();
    }
    return e;
  }

  ExprPtr parse_comparison() {
    ExprPtr lhs = parse_bitwise();
    while (peek().is_punct("<") || peek().is_punct("<=") || peek().is_punct(">") || peek().is_punct(">=")) {
      std::string op = advance().upper;
      lhs = binary(op, std::move(lhs), parse_bitwise());
    }
    return lhs;
  }

  ExprPtr parse_bitwise() {
    ExprPtr lhs = parse_additive();
    while (peek().is_punct("&") || peek().is_punct("|") || peek().is_punct("<<") || peek().is_punct(">>")) {
      std::string op = advance().upper;
      lhs = binary(op, std::move(lhs), parse_additive());
    }
    return lhs;
  }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_multiplicative();
    while (peek().is_punct("+") || peek().is_punct("-")) {
      std::string op = advance().upper;
      lhs = binary(op, std::move(lhs), parse_multiplicative());
    }
    return lhs;
  }

  ExprPtr parse_multiplicative() {
    ExprPtr lhs = parse_concat();
    while (peek().is_punct("*") || peek().is_punct("/") || peek().is_punct("%")) {
      std::string op = advance().upper;
      lhs = binary(op, std::move(lhs), parse_concat());
    }
    return lhs;
  }

  ExprPtr parse_concat() {
    ExprPtr lhs = parse_unary();
    while (peek().is_punct("||") || peek().is_punct("->") || peek().is_punct("->>")) {
      std::string op = advance().upper;
      lhs = binary(op, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (peek().is_punct("-") || peek().is_punct("+") || peek().is_punct("~")) {
      std::string op = advance().upper;
      return unary(op, parse_unary());
    }
    ExprPtr e = parse_primary();
    while (accept_word("COLLATE")) {
      auto c = make(ExprKind::kCollate, expect_ident().name);
      c->args.push_back(std::move(e));
      e = std::move(c);
    }
    return e;
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::kNumber:
      case TokenKind::kString:
      case TokenKind::kBlob:
        return make(ExprKind::kLiteral, advance().text);
      case TokenKind::kParameter:
        return make(ExprKind::kParameter, advance().text);
      case TokenKind::kPunct:
        if (t.is_punct("(")) return parse_parenthesized();
        syntax_error();
      case TokenKind::kEnd:
        syntax_error();
      case TokenKind::kQuotedIdent:
      case TokenKind::kDoubleQuoted:
        return parse_column_ref();
      case TokenKind::kWord:
        break;
    }
    if (t.is_word("NULL") || t.is_word("TRUE") || t.is_word("FALSE") || t.is_word("CURRENT_DATE") ||
        t.is_word("CURRENT_TIME") || t.is_word("CURRENT_TIMESTAMP")) {
      return make(ExprKind::kLiteral, advance().upper);
    }
    if (t.is_word("CASE")) return parse_case();
    if (t.is_word("CAST")) return parse_cast();
    if (t.is_word("EXISTS") || (t.is_word("NOT") && peek(1).is_word("EXISTS"))) {
      bool negated = accept_word("NOT");
      advance();
      expect_punct("(");
      auto e = make(ExprKind::kExists);
      e->flag = negated;
      e->subquery = parse_select_body();
      expect_punct(")");
      return e;
    }
    if (t.is_word("RAISE")) syntax_error();
    if (peek(1).is_punct("(") && !kNotPrimary.count(t.upper) && !t.is_word("NOT")) return parse_function();
    if (kNotPrimary.count(t.upper) || t.is_word("NOT")) syntax_error();
    return parse_column_ref();
  }

  ExprPtr parse_parenthesized() {
    expect_punct("(");
    if (at_select_start()) {
      auto e = make(ExprKind::kSubquery);
      e->subquery = parse_select_body();
      expect_punct(")");
      return e;
    }
    ExprPtr first = parse_expr();
    if (accept_punct(")")) return first;
    auto row = make(ExprKind::kRow);
    row->args.push_back(std::move(first));
    while (accept_punct(",")) row->args.push_back(parse_expr());
    expect_punct(")");
    return row;
  }

  ExprPtr parse_column_ref() {
    auto e = make(ExprKind::kColumn);
    e->path.push_back(make_ident(advance()));
    while (peek().is_punct(".") && e->path.size() < 3) {
      advance();
      const Token& t = peek();
      if (!t.is_identifier_like()) syntax_error();
      e->path.push_back(make_ident(advance()));
    }
    return e;
  }

  ExprPtr parse_function() {
    auto e = make(ExprKind::kFunction, advance().upper);
    expect_punct("(");
    if (accept_punct("*")) {
      e->star = true;
    } else if (!peek().is_punct(")")) {
      if (accept_word("DISTINCT")) {
        e->flag = true;
      } else {
        accept_word("ALL");
      }
      do {
        e->args.push_back(parse_expr());
      } while (accept_punct(","));
      if (accept_word("ORDER")) {
        expect_word("BY");
        for (auto& term : parse_ordering_terms()) e->window_order.push_back(std::move(term.expr));
      }
    }
    expect_punct(")");
    if (peek().is_word("FILTER") && peek(1).is_punct("(")) {
      advance();
      advance();
      expect_word("WHERE");
      e->filter = parse_expr();
      expect_punct(")");
    }
    if (peek().is_word("OVER")) {
      advance();
      if (accept_punct("(")) {
        parse_window_body(e->window_partition, e->window_order, e->window_name);
      } else {
        e->window_name = expect_ident().name;
      }
    }
    return e;
  }

  ExprPtr parse_case() {
    expect_word("CASE");
    auto e = make(ExprKind::kCase);
    if (!peek().is_word("WHEN")) {
      e->case_has_operand = true;
      e->args.push_back(parse_expr());
    }
    bool any = false;
    while (accept_word("WHEN")) {
      any = true;
      e->args.push_back(parse_expr());
      expect_word("THEN");
      e->args.push_back(parse_expr());
    }
    if (!any) syntax_error();
    if (accept_word("ELSE")) {
      e->case_has_else = true;
      e->args.push_back(parse_expr());
    }
    expect_word("END");
    return e;
  }

  ExprPtr parse_cast() {
    expect_word("CAST");
    expect_punct("(");
    auto e = make(ExprKind::kCast);
    e->args.push_back(parse_expr());
    expect_word("AS");
    std::string type;
    while (peek().kind == TokenKind::kWord) {
      if (!type.empty()) type += ' ';
      type += advance().upper;
    }
    if (accept_punct("(")) {
      type += '(';
      while (!peek().is_punct(")")) {
        if (peek().kind == TokenKind::kEnd) syntax_error();
        type += advance().text;
      }
      type += ')';
      advance();
    }
    if (type.empty()) syntax_error();
    e->text = type;
    expect_punct(")");
    return e;
  }
};

}  // namespace

SelectPtr parse_select(std::string_view sql) {
  Parser parser(sql);
  return parser.parse_statement();
}

}  // namespace sqlharness::sql
