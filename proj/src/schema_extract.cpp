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

#include "sqlharness/schema_extract.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "sqlharness/sql_parser.hpp"

namespace sqlharness {

namespace {

using sql::Expr;
using sql::ExprKind;
using sql::Ident;
using sql::JoinItem;
using sql::OrderingTerm;
using sql::ResultColumn;
using sql::Select;
using sql::SelectCore;
using sql::TableSource;

struct Source {
  enum class Kind { kBase, kDerived, kUnknown };
  Kind kind = Kind::kBase;
  std::string key;    // alias, or the table/CTE name
  std::string table;  // base table name
  std::vector<std::string> columns;
  bool opaque = false;  // derived source whose column list is unknown

  bool has_column(const std::string& c) const {
    return std::find(columns.begin(), columns.end(), c) != columns.end();
  }
};

struct Scope {
  const Scope* parent = nullptr;
  std::vector<Source> sources;
  std::vector<std::string> aliases;
};

// CTEs visible at a point of the query. nullopt columns = still being
// defined (recursive reference).
struct CteEnv {
  const CteEnv* parent = nullptr;
  std::map<std::string, std::optional<std::vector<std::string>>> ctes;

  const std::optional<std::vector<std::string>>* find(const std::string& name) const {
    for (const CteEnv* e = this; e; e = e->parent) {
      if (auto it = e->ctes.find(name); it != e->ctes.end()) return &it->second;
    }
    return nullptr;
  }
};

bool is_rowid(const std::string& name) { return name == "rowid" || name == "oid" || name == "_rowid_"; }

class Resolver {
 public:
  Resolver(const Catalog& catalog, const ExtractOptions& options) : catalog_(catalog), options_(options) {}

  ExtractionResult run(const Select& select) {
    process_select(select, nullptr, nullptr);
    std::sort(result_.unresolved.begin(), result_.unresolved.end());
    result_.unresolved.erase(std::unique(result_.unresolved.begin(), result_.unresolved.end()),
                             result_.unresolved.end());
    std::sort(result_.ambiguous.begin(), result_.ambiguous.end());
    result_.ambiguous.erase(std::unique(result_.ambiguous.begin(), result_.ambiguous.end()),
                            result_.ambiguous.end());
    return std::move(result_);
  }

 private:
  const Catalog& catalog_;
  const ExtractOptions& options_;
  ExtractionResult result_;

  void add_column(const std::string& table, const std::string& column) { result_.schema.add_column(table, column); }

  // Returns the output column names of the statement.
  std::vector<std::string> process_select(const Select& select, const Scope* outer, const CteEnv* env) {
    CteEnv local;
    local.parent = env;
    for (const auto& cte : select.ctes) {
      std::optional<std::vector<std::string>> declared;
      if (!cte.columns.empty()) {
        declared.emplace();
        for (const auto& c : cte.columns) declared->push_back(c.name);
      }
      local.ctes[cte.name.name] = declared;
      auto body = process_select(*cte.select, outer, &local);
      local.ctes[cte.name.name] = declared ? *declared : body;
    }
    std::vector<std::string> names;
    const bool compound = select.cores.size() > 1;
    for (std::size_t i = 0; i < select.cores.size(); ++i) {
      const std::vector<OrderingTerm>* order = (i == 0 && !select.order_by.empty()) ? &select.order_by : nullptr;
      auto core_names = process_core(select.cores[i], outer, &local, order, compound);
      if (i == 0) names = std::move(core_names);
    }
    Scope constants;
    constants.parent = outer;
    if (select.limit) walk(*select.limit, constants, &local, false);
    if (select.offset) walk(*select.offset, constants, &local, false);
    return names;
  }

  std::vector<std::string> process_core(const SelectCore& core, const Scope* outer, const CteEnv* env,
                                        const std::vector<OrderingTerm>* order_by, bool compound) {
    Scope scope;
    scope.parent = outer;
    if (core.is_values) {
      std::vector<std::string> names;
      for (const auto& row : core.values) {
        for (const auto& e : row) walk(*e, scope, env, false);
      }
      if (!core.values.empty()) {
        for (std::size_t i = 0; i < core.values.front().size(); ++i) names.push_back("column" + std::to_string(i + 1));
      }
      return names;
    }

    add_join_items(core.from, scope, outer, env);

    for (const auto& col : core.columns) {
      if (col.alias) scope.aliases.push_back(*col.alias);
    }
    std::vector<std::string> names;
    for (const auto& col : core.columns) {
      switch (col.kind) {
        case ResultColumn::Kind::kStar:
          for (const auto& src : scope.sources) {
            star_source(src);
            names.insert(names.end(), src.columns.begin(), src.columns.end());
          }
          break;
        case ResultColumn::Kind::kTableStar: {
          const std::string& key = col.table.back().name;
          const Source* src = find_source(scope, key);
          if (!src) {
            result_.unresolved.push_back(key + ".*");
            break;
          }
          star_source(*src);
          names.insert(names.end(), src->columns.begin(), src->columns.end());
          break;
        }
        case ResultColumn::Kind::kExpr:
          walk(*col.expr, scope, env, false);
          if (col.alias) {
            names.push_back(*col.alias);
          } else if (col.expr->kind == ExprKind::kColumn) {
            names.push_back(col.expr->path.back().name);
          } else {
            names.emplace_back();
          }
          break;
      }
    }
    if (core.where) walk(*core.where, scope, env, false);
    for (const auto& g : core.group_by) walk(*g, scope, env, false);
    if (core.having) walk(*core.having, scope, env, false);
    for (const auto& w : core.windows) {
      for (const auto& e : w.partition) walk(*e, scope, env, false);
      for (const auto& e : w.order) walk(*e, scope, env, false);
    }
    if (order_by) {
      if (compound) {
        for (const auto& n : names) {
          if (!n.empty()) scope.aliases.push_back(n);
        }
      }
      for (const auto& term : *order_by) walk(*term.expr, scope, env, true);
    }
    return names;
  }

  void star_source(const Source& src) {
    if (!options_.expand_star || src.kind != Source::Kind::kBase) return;
    for (const auto& c : src.columns) add_column(src.table, c);
  }

  static const Source* find_source(const Scope& scope, const std::string& key) {
    for (const auto& s : scope.sources) {
      if (s.key == key) return &s;
    }
    return nullptr;
  }

  void add_join_items(const std::vector<JoinItem>& items, Scope& scope, const Scope* outer, const CteEnv* env) {
    for (const auto& item : items) {
      const std::size_t left_count = scope.sources.size();
      add_source(item.source, scope, outer, env);
      const std::size_t right_begin = left_count;
      auto left_with = [&](const std::string& col) -> const Source* {
        for (std::size_t i = 0; i < left_count; ++i) {
          const Source& s = scope.sources[i];
          if (s.kind != Source::Kind::kUnknown && s.has_column(col)) return &s;
        }
        return nullptr;
      };
      auto reference = [&](const Source& s, const std::string& col) {
        if (s.kind == Source::Kind::kBase && s.has_column(col)) add_column(s.table, col);
      };
      for (const auto& u : item.using_columns) {
        const Source* left = left_with(u.name);
        bool right_found = false;
        for (std::size_t i = right_begin; i < scope.sources.size(); ++i) {
          if (scope.sources[i].has_column(u.name) || scope.sources[i].opaque) {
            reference(scope.sources[i], u.name);
            right_found = true;
            break;
          }
        }
        if (left) reference(*left, u.name);
        if (!left || !right_found) result_.unresolved.push_back(u.name);
      }
      if (item.natural) {
        for (std::size_t i = right_begin; i < scope.sources.size(); ++i) {
          for (const auto& col : scope.sources[i].columns) {
            if (const Source* left = left_with(col)) {
              reference(*left, col);
              reference(scope.sources[i], col);
            }
          }
        }
      }
      if (item.on) walk(*item.on, scope, env, false);
    }
  }

  void add_source(const TableSource& src, Scope& scope, const Scope* outer, const CteEnv* env) {
    switch (src.kind) {
      case TableSource::Kind::kTable: {
        const std::string& name = src.name.back().name;
        Source s;
        s.key = src.alias.value_or(name);
        const auto* cte = (src.name.size() == 1 && env) ? env->find(name) : nullptr;
        if (cte) {
          s.kind = Source::Kind::kDerived;
          if (*cte) {
            s.columns = **cte;
          } else {
            s.opaque = true;
          }
        } else if (const auto* cols = catalog_.find(name)) {
          s.kind = Source::Kind::kBase;
          s.table = name;
          s.columns = *cols;
          result_.schema.add_table(name);
        } else {
          s.kind = Source::Kind::kUnknown;
          result_.unresolved.push_back("table " + name);
        }
        scope.sources.push_back(std::move(s));
        return;
      }
      case TableSource::Kind::kSubquery: {
        Source s;
        s.kind = Source::Kind::kDerived;
        s.key = src.alias.value_or("");
        s.columns = process_select(*src.subquery, outer, env);
        scope.sources.push_back(std::move(s));
        return;
      }
      case TableSource::Kind::kTableFunction: {
        for (const auto& a : src.function_args) walk(*a, scope, env, false);
        Source s;
        s.kind = Source::Kind::kDerived;
        s.key = src.alias.value_or(src.name.back().name);
        s.opaque = true;
        scope.sources.push_back(std::move(s));
        return;
      }
      case TableSource::Kind::kJoinGroup:
        add_join_items(src.group, scope, outer, env);
        return;
    }
  }

  void walk(const Expr& e, const Scope& scope, const CteEnv* env, bool alias_first) {
    switch (e.kind) {
      case ExprKind::kColumn:
        resolve_column(e, scope, alias_first);
        return;
      case ExprKind::kExists:
      case ExprKind::kSubquery:
        process_select(*e.subquery, &scope, env);
        return;
      case ExprKind::kIn:
        if (e.subquery) process_select(*e.subquery, &scope, env);
        if (!e.in_table.empty()) {
          const std::string& t = e.in_table.back().name;
          if (catalog_.find(t)) {
            result_.schema.add_table(t);
          } else if (!(env && env->find(t))) {
            result_.unresolved.push_back("table " + t);
          }
        }
        break;
      default:
        break;
    }
    for (const auto& a : e.args) walk(*a, scope, env, alias_first);
    if (e.filter) walk(*e.filter, scope, env, false);
    for (const auto& p : e.window_partition) walk(*p, scope, env, false);
    for (const auto& o : e.window_order) walk(*o, scope, env, false);
  }

  void resolve_column(const Expr& e, const Scope& scope, bool alias_first) {
    const Ident& column = e.path.back();
    if (e.path.size() == 1) {
      resolve_unqualified(column, scope, alias_first);
      return;
    }
    const std::string& qualifier = e.path[e.path.size() - 2].name;
    for (const Scope* s = &scope; s; s = s->parent) {
      const Source* src = find_source(*s, qualifier);
      if (!src) continue;
      switch (src->kind) {
        case Source::Kind::kBase:
          if (src->has_column(column.name)) {
            add_column(src->table, column.name);
          } else if (!is_rowid(column.name)) {
            result_.unresolved.push_back(qualifier + "." + column.name);
          }
          return;
        case Source::Kind::kDerived:
          if (!src->opaque && !src->has_column(column.name)) {
            result_.unresolved.push_back(qualifier + "." + column.name);
          }
          return;
        case Source::Kind::kUnknown:
          return;
      }
    }
    result_.unresolved.push_back(qualifier + "." + column.name);
  }

  // true if the name was claimed by a source of `s`
  bool resolve_in(const Scope& s, const std::string& name) {
    const Source* first = nullptr;
    int matches = 0;
    bool opaque = false;
    for (const auto& src : s.sources) {
      if (src.kind == Source::Kind::kUnknown) continue;
      if (src.has_column(name)) {
        if (!first) first = &src;
        ++matches;
      } else if (src.opaque) {
        opaque = true;
      }
    }
    if (first) {
      if (first->kind == Source::Kind::kBase) add_column(first->table, name);
      if (matches > 1) result_.ambiguous.push_back(name);
      return true;
    }
    return opaque;
  }

  void resolve_unqualified(const Ident& column, const Scope& scope, bool alias_first) {
    const std::string& name = column.name;
    auto is_alias = [&](const Scope& s) {
      return std::find(s.aliases.begin(), s.aliases.end(), name) != s.aliases.end();
    };
    if (alias_first && is_alias(scope)) return;
    if (resolve_in(scope, name)) return;
    if (is_alias(scope)) return;
    for (const Scope* s = scope.parent; s; s = s->parent) {
      if (resolve_in(*s, name)) return;
    }
    if (is_rowid(name)) {
      for (const auto& src : scope.sources) {
        if (src.kind == Source::Kind::kBase) return;
      }
    }
    // SQLite reads an unresolvable "x" as the string 'x'.
    if (column.double_quoted) return;
    result_.unresolved.push_back(name);
  }
};

}  // namespace

ExtractionResult extract_schema(const sql::Select& select, const Catalog& catalog, const ExtractOptions& options) {
  Resolver resolver(catalog, options);
  return resolver.run(select);
}

ExtractionResult extract_schema(std::string_view sql_text, const Catalog& catalog, const ExtractOptions& options) {
  sql::SelectPtr select;
  try {
    select = sql::parse_select(sql_text);
  } catch (const sql::ParseError& e) {
    throw ExtractionError(e.what());
  }
  return extract_schema(*select, catalog, options);
}

}  // namespace sqlharness
