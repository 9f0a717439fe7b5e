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

#ifndef SQLHARNESS_SQL_PARSER_HPP_
#define SQLHARNESS_SQL_PARSER_HPP_

#include <string_view>

#include "sqlharness/sql_ast.hpp"
#include "sqlharness/sql_lexer.hpp"

namespace sqlharness::sql {

// Parses one SELECT statement (optionally WITH-prefixed, optionally followed
// by a single ';'). Throws ParseError for anything else.
SelectPtr parse_select(std::string_view sql);

}  // namespace sqlharness::sql

#endif  // SQLHARNESS_SQL_PARSER_HPP_
