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

// Referenced-schema extraction: which base tables and columns a SELECT
// touches, with aliases, CTEs and derived tables resolved against a catalog.

#ifndef SQLHARNESS_SCHEMA_EXTRACT_HPP_
#define SQLHARNESS_SCHEMA_EXTRACT_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sqlharness/catalog.hpp"
#include "sqlharness/model.hpp"
#include "sqlharness/sql_ast.hpp"

namespace sqlharness {

struct ExtractOptions {
  // Expand SELECT * / T.* to every catalog column instead of a table-level
  // reference.
  bool expand_star = false;
};

struct ExtractionResult {
  SchemaSet schema;
  // "col", "alias.col" or "table name" entries that resolved to nothing.
  std::vector<std::string> unresolved;
  // Unqualified columns present in more than one in-scope table; attributed
  // to the first in FROM order.
  std::vector<std::string> ambiguous;
};

class ExtractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws ExtractionError (carrying the parser message) for unparseable SQL.
ExtractionResult extract_schema(std::string_view sql, const Catalog& catalog, const ExtractOptions& options = {});

ExtractionResult extract_schema(const sql::Select& select, const Catalog& catalog,
                                const ExtractOptions& options = {});

}  // namespace sqlharness

#endif  // SQLHARNESS_SCHEMA_EXTRACT_HPP_
