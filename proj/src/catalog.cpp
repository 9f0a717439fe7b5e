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

#include "sqlharness/catalog.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "sqlharness/model.hpp"
#include "sqlite_util.hpp"

namespace sqlharness {

namespace detail {

DbHandle open_read_only(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw DatabaseError("unable to open database file: " + path.string());
  }
  // Percent-encode everything a URI path could misread.
  std::string uri = "file:";
  for (unsigned char c : std::filesystem::absolute(path).string()) {
    if (c == '?' || c == '#' || c == '%' || c < 0x20 || c >= 0x7f) {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      uri += buf;
    } else {
      uri += static_cast<char>(c);
    }
  }
  uri += "?mode=ro&immutable=1";
  sqlite3* raw = nullptr;
  int rc = sqlite3_open_v2(uri.c_str(), &raw, SQLITE_OPEN_READONLY | SQLITE_OPEN_URI | SQLITE_OPEN_NOMUTEX,
                           nullptr);
  DbHandle db(raw);
  if (rc != SQLITE_OK) {
    std::string msg = raw ? sqlite3_errmsg(raw) : "out of memory";
    throw DatabaseError(msg + ": " + path.string());
  }
  return db;
}

}  // namespace detail

void Catalog::add_table(std::string_view table, const std::vector<std::string>& columns) {
  std::string name = normalize_identifier(table);
  if (tables_.count(name)) throw std::invalid_argument("duplicate table '" + name + "'");
  std::vector<std::string> cols;
  std::set<std::string> seen;
  for (const auto& c : columns) {
    std::string col = normalize_identifier(c);
    if (!seen.insert(col).second) {
      throw std::invalid_argument("duplicate column '" + col + "' in table '" + name + "'");
    }
    cols.push_back(std::move(col));
  }
  tables_.emplace(std::move(name), std::move(cols));
}

const std::vector<std::string>* Catalog::find(std::string_view table) const {
  auto it = tables_.find(std::string(table));
  return it == tables_.end() ? nullptr : &it->second;
}

bool Catalog::has_column(std::string_view table, std::string_view column) const {
  const auto* cols = find(table);
  return cols && std::find(cols->begin(), cols->end(), column) != cols->end();
}

Catalog catalog_from_database(const std::filesystem::path& path, bool include_views) {
  auto db = detail::open_read_only(path);
  auto prepare = [&](const char* sql) {
    sqlite3_stmt* raw = nullptr;
    if (sqlite3_prepare_v2(db.get(), sql, -1, &raw, nullptr) != SQLITE_OK) {
      throw DatabaseError(std::string(sqlite3_errmsg(db.get())) + ": " + path.string());
    }
    return detail::StmtHandle(raw);
  };

  auto list = prepare(
      "SELECT name, type FROM sqlite_master WHERE type IN ('table', 'view') "
      "AND name NOT LIKE 'sqlite!_%' ESCAPE '!' ORDER BY name");
  std::vector<std::string> names;
  int rc;
  while ((rc = sqlite3_step(list.get())) == SQLITE_ROW) {
    std::string name = reinterpret_cast<const char*>(sqlite3_column_text(list.get(), 0));
    std::string type = reinterpret_cast<const char*>(sqlite3_column_text(list.get(), 1));
    if (type == "view" && !include_views) continue;
    names.push_back(std::move(name));
  }
  if (rc != SQLITE_DONE) throw DatabaseError(std::string(sqlite3_errmsg(db.get())) + ": " + path.string());

  Catalog catalog;
  auto info = prepare("SELECT name FROM pragma_table_info(?1) ORDER BY cid");
  for (const auto& table : names) {
    sqlite3_reset(info.get());
    sqlite3_bind_text(info.get(), 1, table.c_str(), -1, SQLITE_TRANSIENT);
    std::vector<std::string> cols;
    while ((rc = sqlite3_step(info.get())) == SQLITE_ROW) {
      cols.emplace_back(reinterpret_cast<const char*>(sqlite3_column_text(info.get(), 0)));
    }
    if (rc != SQLITE_DONE) throw DatabaseError(std::string(sqlite3_errmsg(db.get())) + ": " + path.string());
    catalog.add_table(table, cols);
  }
  return catalog;
}

}  // namespace sqlharness
