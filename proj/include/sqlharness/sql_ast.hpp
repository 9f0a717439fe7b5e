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

// Syntax tree for SQLite SELECT statements. Only the structure that matters
// for name resolution is kept; operators and literals are stored as text.

#ifndef SQLHARNESS_SQL_AST_HPP_
#define SQLHARNESS_SQL_AST_HPP_

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sqlharness::sql {

struct Select;
using SelectPtr = std::unique_ptr<Select>;

struct Ident {
  std::string name;           // canonical (unquoted, lowercased)
  bool double_quoted = false;  // "x" may fall back to a string literal
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class ExprKind {
  kLiteral,     // text = literal source
  kParameter,
  kColumn,      // path = [schema.]table.column or column
  kFunction,    // text = function name; args; flag = DISTINCT; star = f(*)
  kUnary,       // text = operator; args[0]
  kBinary,      // text = operator; args[0], args[1]
  kBetween,     // args = expr, low, high; flag = NOT
  kIn,          // args[0] = expr, rest = list; or subquery; or in_table; flag = NOT
  kExists,      // subquery
  kSubquery,    // scalar subquery
  kCase,        // args = [operand?] (when, then)* [else]; see case_has_operand/case_has_else
  kCast,        // args[0]; text = type name
  kCollate,     // args[0]; text = collation
  kRow,         // (a, b, ...)
};

struct Expr {
  ExprKind kind = ExprKind::kLiteral;
  std::string text;
  std::vector<Ident> path;
  std::vector<ExprPtr> args;
  SelectPtr subquery;
  bool flag = false;
  bool star = false;
  bool case_has_operand = false;
  bool case_has_else = false;
  std::vector<Ident> in_table;              // x IN table_name
  ExprPtr filter;                            // aggregate FILTER (WHERE ...)
  std::vector<ExprPtr> window_partition;     // OVER (PARTITION BY ...)
  std::vector<ExprPtr> window_order;         // OVER (ORDER BY ...)
  std::optional<std::string> window_name;    // OVER name / base window
};

struct ResultColumn {
  enum class Kind { kExpr, kStar, kTableStar } kind = Kind::kExpr;
  ExprPtr expr;
  std::optional<std::string> alias;  // canonical
  std::vector<Ident> table;          // for kTableStar
};

struct JoinItem;

struct TableSource {
  enum class Kind { kTable, kSubquery, kJoinGroup, kTableFunction } kind = Kind::kTable;
  std::vector<Ident> name;  // [schema.]table, for kTable / kTableFunction
  std::optional<std::string> alias;
  SelectPtr subquery;
  std::vector<JoinItem> group;  // parenthesized join
  std::vector<ExprPtr> function_args;
};

struct JoinItem {
  bool natural = false;
  std::string op;  // "" for the first item, "," or "JOIN", "LEFT JOIN", ...
  TableSource source;
  ExprPtr on;
  std::vector<Ident> using_columns;
};

struct WindowDef {
  std::string name;
  std::vector<ExprPtr> partition;
  std::vector<ExprPtr> order;
};

struct SelectCore {
  bool is_values = false;
  std::vector<std::vector<ExprPtr>> values;
  bool distinct = false;
  std::vector<ResultColumn> columns;
  std::vector<JoinItem> from;
  ExprPtr where;
  std::vector<ExprPtr> group_by;
  ExprPtr having;
  std::vector<WindowDef> windows;
};

struct Cte {
  Ident name;
  std::vector<Ident> columns;
  SelectPtr select;
};

struct OrderingTerm {
  ExprPtr expr;
  bool descending = false;
};

struct Select {
  bool recursive = false;
  std::vector<Cte> ctes;
  std::vector<SelectCore> cores;
  std::vector<std::string> compound_ops;  // size = cores.size() - 1
  std::vector<OrderingTerm> order_by;
  ExprPtr limit;
  ExprPtr offset;
};

}  // namespace sqlharness::sql

#endif  // SQLHARNESS_SQL_AST_HPP_
