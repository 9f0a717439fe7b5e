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

#ifndef SQLHARNESS_SQL_LEXER_HPP_
#define SQLHARNESS_SQL_LEXER_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sqlharness::sql {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : std::runtime_error(message), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

enum class TokenKind {
  kWord,            // bare identifier or keyword
  kQuotedIdent,     // `x` or [x]
  kDoubleQuoted,    // "x": identifier, or a string if it resolves to nothing
  kString,          // 'x'
  kNumber,
  kBlob,            // x'..'
  kParameter,       // ?, ?1, :name, @name, $name
  kPunct,           // operators and punctuation
  kEnd,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;   // raw source slice
  std::string upper;  // uppercased text for kWord, operator text for kPunct
  std::size_t offset = 0;

  bool is_word(std::string_view kw) const { return kind == TokenKind::kWord && upper == kw; }
  bool is_punct(std::string_view p) const { return kind == TokenKind::kPunct && upper == p; }
  bool is_identifier_like() const {
    return kind == TokenKind::kWord || kind == TokenKind::kQuotedIdent || kind == TokenKind::kDoubleQuoted;
  }
};

// Always ends with a kEnd token. Throws ParseError on an unterminated
// literal or an unknown character.
std::vector<Token> tokenize(std::string_view sql);

}  // namespace sqlharness::sql

#endif  // SQLHARNESS_SQL_LEXER_HPP_
