// Copyright 2026 The Mercury Mini Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mercury/catalog/schema.h"
#include "mercury/common/predicate.h"
#include "mercury/common/value.h"

namespace mercury {

enum class TokenKind : uint8_t {
  kIdent,     // bare or "quoted" identifier
  kKeyword,   // reserved word, text upper-cased
  kInteger,
  kFloat,
  kString,    // 'single quoted', '' escapes a quote
  kSymbol,    // ( ) , * ; = < <= > >= <> !=
  kEnd,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;
  size_t offset = 0;  // byte offset into the source
};

// Throws kParseError naming the byte offset of the bad character.
std::vector<Token> Tokenize(std::string_view source);

struct SelectItem {
  enum class Kind : uint8_t { kStar, kColumn, kAgg };
  Kind kind = Kind::kColumn;
  std::string column;  // empty for count(*)
  AggFunc func = AggFunc::kCountStar;
  std::string alias;
  size_t offset = 0;

  // Header used when printing results.
  std::string Label() const;
};

struct Condition {
  std::string column;
  CompareOp op = CompareOp::kEq;
  Value literal;
  size_t offset = 0;
};

// SELECT <items> FROM <table> [WHERE <cond> {AND <cond>}] [GROUP BY <col>]
struct MiniQuery {
  std::vector<SelectItem> items;
  std::string table;
  std::vector<Condition> where;
  std::optional<std::string> group_by;
};

MiniQuery ParseMiniQuery(std::string_view text);

// Statements accepted by `exec`.
struct CreateTableStmt {
  TableSchema schema;
};
struct CreateMlogStmt {
  std::string table;
};
struct CreateMViewStmt {
  MViewDef def;
  bool policy_given = false;
};
struct InsertStmt {
  std::string table;
  std::vector<std::string> columns;  // empty: schema order
  std::vector<std::vector<Value>> rows;
};
struct UpdateStmt {
  std::string table;
  std::vector<std::pair<std::string, Value>> assignments;
  std::vector<Condition> where;
};
struct DeleteStmt {
  std::string table;
  std::vector<Condition> where;
};
struct DropStmt {
  bool mview = false;
  std::string name;
};
struct SelectStmt {
  MiniQuery query;
};

using Statement = std::variant<CreateTableStmt, CreateMlogStmt, CreateMViewStmt, InsertStmt, UpdateStmt, DeleteStmt,
                               DropStmt, SelectStmt>;

// One or more statements separated by ';'.
std::vector<Statement> ParseStatements(std::string_view text);

}  // namespace mercury
