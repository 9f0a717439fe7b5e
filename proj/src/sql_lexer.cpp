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

#include "sqlharness/sql_lexer.hpp"

#include <cctype>

namespace sqlharness::sql {

namespace {

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80; }

std::string upper_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::vector<Token> tokenize(std::string_view sql) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = sql.size();

  auto emit = [&](TokenKind kind, std::size_t start, std::size_t end, std::string upper = {}) {
    Token t;
    t.kind = kind;
    t.text.assign(sql.substr(start, end - start));
    t.upper = upper.empty() ? t.text : std::move(upper);
    t.offset = start;
    out.push_back(std::move(t));
  };
  auto quoted = [&](std::size_t start, char close) {
    std::size_t j = start + 1;
    while (true) {
      if (j >= n) throw ParseError("unterminated quoted token", start);
      if (sql[j] == close) {
        if (close != ']' && j + 1 < n && sql[j + 1] == close) {
          j += 2;
          continue;
        }
        return j + 1;
      }
      ++j;
    }
  };

  while (i < n) {
    unsigned char c = static_cast<unsigned char>(sql[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < n && sql[i + 1] == '-') {
      while (i < n && sql[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && sql[i + 1] == '*') {
      auto end = sql.find("*/", i + 2);
      i = end == std::string_view::npos ? n : end + 2;
      continue;
    }
    const std::size_t start = i;
    if ((c == 'x' || c == 'X') && i + 1 < n && sql[i + 1] == '\'') {
      i = quoted(i + 1, '\'');
      emit(TokenKind::kBlob, start, i);
      continue;
    }
    if (is_ident_start(c)) {
      while (i < n && is_ident_char(static_cast<unsigned char>(sql[i]))) ++i;
      emit(TokenKind::kWord, start, i, upper_ascii(sql.substr(start, i - start)));
      continue;
    }
    if (std::isdigit(c) || (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
      if (c == '0' && i + 1 < n && (sql[i + 1] == 'x' || sql[i + 1] == 'X')) {
        i += 2;
        while (i < n && std::isxdigit(static_cast<unsigned char>(sql[i]))) ++i;
      } else {
        while (i < n && (std::isdigit(static_cast<unsigned char>(sql[i])) || sql[i] == '_')) ++i;
        if (i < n && sql[i] == '.') {
          ++i;
          while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
        }
        if (i < n && (sql[i] == 'e' || sql[i] == 'E')) {
          std::size_t j = i + 1;
          if (j < n && (sql[j] == '+' || sql[j] == '-')) ++j;
          if (j < n && std::isdigit(static_cast<unsigned char>(sql[j]))) {
            i = j;
            while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
          }
        }
      }
      emit(TokenKind::kNumber, start, i);
      continue;
    }
    switch (c) {
      case '\'':
        i = quoted(i, '\'');
        emit(TokenKind::kString, start, i);
        continue;
      case '"':
        i = quoted(i, '"');
        emit(TokenKind::kDoubleQuoted, start, i);
        continue;
      case '`':
        i = quoted(i, '`');
        emit(TokenKind::kQuotedIdent, start, i);
        continue;
      case '[':
        i = quoted(i, ']');
        emit(TokenKind::kQuotedIdent, start, i);
        continue;
      case '?':
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
        emit(TokenKind::kParameter, start, i);
        continue;
      case ':':
      case '@':
      case '$':
        ++i;
        while (i < n && is_ident_char(static_cast<unsigned char>(sql[i]))) ++i;
        if (i == start + 1) throw ParseError("unrecognized token: \"" + std::string(1, static_cast<char>(c)) + "\"", start);
        emit(TokenKind::kParameter, start, i);
        continue;
      default:
        break;
    }
    static constexpr std::string_view kThree[] = {"->>"};
    static constexpr std::string_view kTwo[] = {"||", "<<", ">>", "<=", ">=", "==", "!=", "<>", "->"};
    bool matched = false;
    for (auto op : kThree) {
      if (sql.substr(i, op.size()) == op) {
        i += op.size();
        matched = true;
        break;
      }
    }
    if (!matched) {
      for (auto op : kTwo) {
        if (sql.substr(i, op.size()) == op) {
          i += op.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) {
      static constexpr std::string_view kOne = "*/%+-&|<>=~,();.";
      if (kOne.find(static_cast<char>(c)) == std::string_view::npos) {
        throw ParseError("unrecognized token: \"" + std::string(1, static_cast<char>(c)) + "\"", start);
      }
      ++i;
    }
    emit(TokenKind::kPunct, start, i);
  }
  Token end;
  end.kind = TokenKind::kEnd;
  end.offset = n;
  out.push_back(end);
  return out;
}

}  // namespace sqlharness::sql
