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

#ifndef SQLHARNESS_CATALOG_HPP_
#define SQLHARNESS_CATALOG_HPP_

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sqlharness {

class DatabaseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Table -> ordered column list, canonical names.
class Catalog {
 public:
  // Throws std::invalid_argument on a duplicate table or column.
  void add_table(std::string_view table, const std::vector<std::string>& columns);

  const std::map<std::string, std::vector<std::string>>& tables() const { return tables_; }
  const std::vector<std::string>* find(std::string_view table) const;
  bool has_column(std::string_view table, std::string_view column) const;
  bool empty() const { return tables_.empty(); }

 private:
  std::map<std::string, std::vector<std::string>> tables_;
};

// Lists user tables (and views when `include_views`); sqlite_* internals are
// excluded. Throws DatabaseError for unreadable or corrupt files.
Catalog catalog_from_database(const std::filesystem::path& db, bool include_views = false);

}  // namespace sqlharness

#endif  // SQLHARNESS_CATALOG_HPP_
