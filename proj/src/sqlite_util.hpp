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

#ifndef SQLHARNESS_SRC_SQLITE_UTIL_HPP_
#define SQLHARNESS_SRC_SQLITE_UTIL_HPP_

#include <sqlite3.h>

#include <filesystem>
#include <memory>
#include <string>

namespace sqlharness::detail {

struct DbCloser {
  void operator()(sqlite3* db) const { sqlite3_close_v2(db); }
};
struct StmtFinalizer {
  void operator()(sqlite3_stmt* stmt) const { sqlite3_finalize(stmt); }
};

using DbHandle = std::unique_ptr<sqlite3, DbCloser>;
using StmtHandle = std::unique_ptr<sqlite3_stmt, StmtFinalizer>;

// Opens `path` read-only and immutable: no journal, no locks, no writes.
// Throws DatabaseError.
DbHandle open_read_only(const std::filesystem::path& path);

}  // namespace sqlharness::detail

#endif  // SQLHARNESS_SRC_SQLITE_UTIL_HPP_
