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

#include "mercury/cli/query.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <set>

#include "mercury/common/error.h"

namespace mercury {

namespace {

const std::set<std::string>& ReservedWords() {
  static const std::set<std::string> kWords = {"SELECT", "FROM", "WHERE", "GROUP", "BY",  "AND", "AS",
                                               "COUNT",  "SUM",  "MIN",   "MAX",   "AVG", "NULL"};
  return kWords;
}

std::string Upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool IsIdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool IsIdentChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool IsDigit(char c) { return c >= '0' && c <= '9'; }

[[noreturn]] void FailAt(size_t offset, const std::string& what) {
  throw Error(ErrorCode::kParseError, "at byte " + std::to_string(offset) + ": " + what);
}

}  // namespace

std::vector<Token> Tokenize(std::string_view src) {
  std::vector<Token> out;
  size_t i = 0;
  const size_t n = src.size();
  while (i < n) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < n && src[i + 1] == '-') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    Token t;
    t.offset = i;
    if (IsIdentStart(c)) {
      size_t s = i;
      while (i < n && IsIdentChar(src[i])) ++i;
      t.text = std::string(src.substr(s, i - s));
      std::string up = Upper(t.text);
      if (ReservedWords().count(up)) {
        t.kind = TokenKind::kKeyword;
        t.text = up;
      } else {
        t.kind = TokenKind::kIdent;
      }
    } else if (c == '"') {
      size_t s = ++i;
      while (i < n && src[i] != '"') ++i;
      if (i >= n) FailAt(t.offset, "unterminated quoted identifier");
      t.kind = TokenKind::kIdent;
      t.text = std::string(src.substr(s, i - s));
      ++i;
    } else if (c == '\'') {
      ++i;
      for (;;) {
        if (i >= n) FailAt(t.offset, "unterminated string literal");
        if (src[i] == '\'') {
          if (i + 1 < n && src[i + 1] == '\'') {
            t.text.push_back('\'');
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        t.text.push_back(src[i++]);
      }
      t.kind = TokenKind::kString;
    } else if (IsDigit(c) || ((c == '-' || c == '+' || c == '.') && i + 1 < n && (IsDigit(src[i + 1]) || (src[i + 1] == '.' && c != '.')))) {
      size_t s = i;
      if (c == '-' || c == '+') ++i;
      bool is_float = false;
      while (i < n && IsDigit(src[i])) ++i;
      if (i < n && src[i] == '.') {
        is_float = true;
        ++i;
        while (i < n && IsDigit(src[i])) ++i;
      }
      if (i < n && (src[i] == 'e' || src[i] == 'E')) {
        size_t save = i++;
        if (i < n && (src[i] == '+' || src[i] == '-')) ++i;
        if (i < n && IsDigit(src[i])) {
          is_float = true;
          while (i < n && IsDigit(src[i])) ++i;
        } else {
          i = save;
        }
      }
      if (i < n && IsIdentStart(src[i])) FailAt(i, "malformed number");
      t.kind = is_float ? TokenKind::kFloat : TokenKind::kInteger;
      t.text = std::string(src.substr(s, i - s));
    } else {
      static const char* kTwo[] = {"<=", ">=", "<>", "!="};
      t.kind = TokenKind::kSymbol;
      for (const char* two : kTwo) {
        if (src.substr(i, 2) == two) t.text = two;
      }
      if (t.text.empty()) {
        if (std::string_view("(),*;=<>").find(c) == std::string_view::npos) {
          FailAt(i, std::string("unexpected character '") + c + "'");
        }
        t.text = std::string(1, c);
      }
      i += t.text.size();
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = TokenKind::kEnd;
  end.offset = n;
  out.push_back(end);
  return out;
}

std::string SelectItem::Label() const {
  if (!alias.empty()) return alias;
  switch (kind) {
    case Kind::kStar: return "*";
    case Kind::kColumn: return column;
    case Kind::kAgg: {
      std::string name(AggFuncName(func));
      if (func == AggFunc::kCountStar) return "count(*)";
      if (func == AggFunc::kCountCol) name = "count";
      return name + "(" + column + ")";
    }
  }
  return column;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(Tokenize(text)) {}

  const Token& Peek() const { return tokens_[pos_]; }
  const Token& Next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool AtEnd() const { return Peek().kind == TokenKind::kEnd; }

  [[noreturn]] void Expected(const std::string& what) const {
    const Token& t = Peek();
    std::string found = t.kind == TokenKind::kEnd ? "end of input" : "'" + t.text + "'";
    FailAt(t.offset, "expected " + what + ", found " + found);
  }

  bool IsKeyword(std::string_view kw) const { return Peek().kind == TokenKind::kKeyword && Peek().text == kw; }
  // Contextual words are plain identifiers compared case-insensitively.
  bool IsWord(std::string_view w) const {
    return (Peek().kind == TokenKind::kIdent || Peek().kind == TokenKind::kKeyword) && Upper(Peek().text) == w;
  }
  bool IsSymbol(std::string_view s) const { return Peek().kind == TokenKind::kSymbol && Peek().text == s; }

  void ExpectKeyword(std::string_view kw) {
    if (!IsKeyword(kw)) Expected(std::string(kw));
    Next();
  }
  void ExpectWord(std::string_view w) {
    if (!IsWord(w)) Expected(std::string(w));
    Next();
  }
  void ExpectSymbol(std::string_view s) {
    if (!IsSymbol(s)) Expected("'" + std::string(s) + "'");
    Next();
  }
  bool AcceptSymbol(std::string_view s) {
    if (!IsSymbol(s)) return false;
    Next();
    return true;
  }
  bool AcceptWord(std::string_view w) {
    if (!IsWord(w)) return false;
    Next();
    return true;
  }
  std::string ExpectIdent(const std::string& what = "identifier") {
    if (Peek().kind != TokenKind::kIdent) Expected(what);
    return Next().text;
  }

  Value ParseLiteral() {
    const Token& t = Peek();
    switch (t.kind) {
      case TokenKind::kInteger: {
        int64_t v = 0;
        const char* b = t.text.data();
        if (*b == '+') ++b;
        auto [p, ec] = std::from_chars(b, t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size()) FailAt(t.offset, "integer out of range");
        Next();
        return v;
      }
      case TokenKind::kFloat: {
        double v = std::strtod(t.text.c_str(), nullptr);
        Next();
        return v;
      }
      case TokenKind::kString: return std::string(Next().text);
      case TokenKind::kKeyword:
        if (t.text == "NULL") {
          Next();
          return std::monostate{};
        }
        break;
      default: break;
    }
    Expected("literal");
  }

  CompareOp ParseCompareOp() {
    if (Peek().kind == TokenKind::kSymbol) {
      const std::string& s = Peek().text;
      std::optional<CompareOp> op;
      if (s == "=") op = CompareOp::kEq;
      if (s == "<>" || s == "!=") op = CompareOp::kNe;
      if (s == "<") op = CompareOp::kLt;
      if (s == "<=") op = CompareOp::kLe;
      if (s == ">") op = CompareOp::kGt;
      if (s == ">=") op = CompareOp::kGe;
      if (op) {
        Next();
        return *op;
      }
    }
    Expected("comparison operator");
  }

  Condition ParseCondition() {
    Condition c;
    c.offset = Peek().offset;
    c.column = ExpectIdent("column name");
    c.op = ParseCompareOp();
    c.literal = ParseLiteral();
    return c;
  }

  std::vector<Condition> ParseWhere() {
    std::vector<Condition> out;
    if (!IsKeyword("WHERE")) return out;
    Next();
    out.push_back(ParseCondition());
    while (IsKeyword("AND")) {
      Next();
      out.push_back(ParseCondition());
    }
    return out;
  }

  SelectItem ParseItem() {
    SelectItem item;
    item.offset = Peek().offset;
    if (AcceptSymbol("*")) {
      item.kind = SelectItem::Kind::kStar;
      return item;
    }
    if (Peek().kind == TokenKind::kKeyword) {
      static const std::pair<const char*, AggFunc> kAggs[] = {
          {"COUNT", AggFunc::kCountCol}, {"SUM", AggFunc::kSum}, {"MIN", AggFunc::kMin},
          {"MAX", AggFunc::kMax},        {"AVG", AggFunc::kAvg}};
      for (const auto& [name, func] : kAggs) {
        if (Peek().text != name) continue;
        Next();
        item.kind = SelectItem::Kind::kAgg;
        item.func = func;
        ExpectSymbol("(");
        if (func == AggFunc::kCountCol && AcceptSymbol("*")) {
          item.func = AggFunc::kCountStar;
        } else {
          item.column = ExpectIdent("column name");
        }
        ExpectSymbol(")");
        if (IsKeyword("AS")) {
          Next();
          item.alias = ExpectIdent("alias");
        }
        return item;
      }
    }
    item.kind = SelectItem::Kind::kColumn;
    item.column = ExpectIdent("column name or aggregate");
    if (IsKeyword("AS")) {
      Next();
      item.alias = ExpectIdent("alias");
    }
    return item;
  }

  MiniQuery ParseSelect() {
    MiniQuery q;
    ExpectKeyword("SELECT");
    q.items.push_back(ParseItem());
    while (AcceptSymbol(",")) q.items.push_back(ParseItem());
    ExpectKeyword("FROM");
    q.table = ExpectIdent("table name");
    q.where = ParseWhere();
    if (IsKeyword("GROUP")) {
      Next();
      ExpectKeyword("BY");
      q.group_by = ExpectIdent("column name");
    }
    CheckShape(q);
    return q;
  }

  // Rejects item lists no scan plan can produce.
  static void CheckShape(const MiniQuery& q) {
    bool has_agg = std::any_of(q.items.begin(), q.items.end(),
                               [](const SelectItem& i) { return i.kind == SelectItem::Kind::kAgg; });
    for (const auto& item : q.items) {
      if (item.kind == SelectItem::Kind::kStar && (has_agg || q.group_by || q.items.size() > 1)) {
        FailAt(item.offset, "'*' must be the only select item");
      }
      if (item.kind != SelectItem::Kind::kColumn) continue;
      if (q.group_by && item.column != *q.group_by) {
        FailAt(item.offset, "column " + item.column + " is neither grouped nor aggregated");
      }
      if (!q.group_by && has_agg) FailAt(item.offset, "column " + item.column + " mixed with aggregates");
    }
  }

  DataType ParseTypeName() {
    size_t offset = Peek().offset;
    std::string name = Upper(ExpectIdent("type name"));
    // Optional length such as varchar(32) is accepted and ignored.
    if (AcceptSymbol("(")) {
      if (Peek().kind != TokenKind::kInteger) Expected("length");
      Next();
      ExpectSymbol(")");
    }
    if (name == "INT" || name == "INT64" || name == "BIGINT" || name == "INTEGER") return DataType::kInt64;
    if (name == "FLOAT" || name == "FLOAT64" || name == "DOUBLE" || name == "REAL") return DataType::kFloat64;
    if (name == "UTF8" || name == "VARCHAR" || name == "TEXT" || name == "STRING" || name == "CHAR") {
      return DataType::kUtf8;
    }
    FailAt(offset, "unknown type " + name);
  }

  CreateTableStmt ParseCreateTable() {
    CreateTableStmt st;
    st.schema.name = ExpectIdent("table name");
    ExpectSymbol("(");
    do {
      if (IsWord("PRIMARY")) {
        Next();
        ExpectWord("KEY");
        ExpectSymbol("(");
        st.schema.pk.push_back(ExpectIdent("column name"));
        while (AcceptSymbol(",")) st.schema.pk.push_back(ExpectIdent("column name"));
        ExpectSymbol(")");
        continue;
      }
      ColumnDef col;
      col.name = ExpectIdent("column name");
      col.type = ParseTypeName();
      for (;;) {
        if (AcceptWord("PRIMARY")) {
          ExpectWord("KEY");
          st.schema.pk.push_back(col.name);
          col.nullable = false;
        } else if (AcceptWord("NOT")) {
          ExpectKeyword("NULL");
          col.nullable = false;
        } else if (IsKeyword("NULL")) {
          Next();
        } else {
          break;
        }
      }
      st.schema.columns.push_back(col);
    } while (AcceptSymbol(","));
    ExpectSymbol(")");
    // Table-level pk columns are implicitly NOT NULL.
    for (auto& col : st.schema.columns) {
      if (std::find(st.schema.pk.begin(), st.schema.pk.end(), col.name) != st.schema.pk.end()) col.nullable = false;
    }
    if (AcceptWord("STORE")) {
      AcceptSymbol("=");
      size_t offset = Peek().offset;
      auto mode = ParseStoreMode(ExpectIdent("store mode"));
      if (!mode) FailAt(offset, "store mode must be row, column or redundant");
      st.schema.store_mode = *mode;
    }
    return st;
  }

  CreateMViewStmt ParseCreateMView() {
    CreateMViewStmt st;
    st.def.name = ExpectIdent("view name");
    if (AcceptWord("REFRESH")) {
      st.policy_given = true;
      if (AcceptWord("FAST") || AcceptWord("INCREMENTAL")) {
        st.def.refresh_policy = RefreshPolicy::kIncremental;
      } else if (AcceptWord("COMPLETE") || AcceptWord("FULL")) {
        st.def.refresh_policy = RefreshPolicy::kFull;
      } else {
        Expected("FAST, INCREMENTAL, COMPLETE or FULL");
      }
    }
    ExpectKeyword("AS");
    size_t offset = Peek().offset;
    MiniQuery q = ParseSelect();
    if (!q.where.empty()) FailAt(offset, "materialized views take no WHERE clause");
    st.def.base_table = q.table;
    if (q.group_by) st.def.group_by.push_back(*q.group_by);
    for (const auto& item : q.items) {
      if (item.kind == SelectItem::Kind::kColumn) {
        if (!q.group_by || item.column != *q.group_by) FailAt(item.offset, "non-aggregate item must be the group column");
        continue;
      }
      if (item.kind != SelectItem::Kind::kAgg) FailAt(item.offset, "materialized views need aggregate items");
      AggSpec spec;
      spec.function = item.func;
      if (item.func != AggFunc::kCountStar) spec.column = item.column;
      std::string label = item.Label();
      spec.output_name = item.alias.empty() ? SanitizeName(label) : item.alias;
      st.def.select_items.push_back(spec);
    }
    return st;
  }

  static std::string SanitizeName(const std::string& label) {
    std::string out;
    for (char c : label) {
      if (IsIdentChar(c)) {
        out.push_back(c);
      } else if (c == '*') {
        out += "star";
      } else if (c == '(') {
        out.push_back('_');
      }
    }
    return out;
  }

  InsertStmt ParseInsert() {
    InsertStmt st;
    ExpectWord("INTO");
    st.table = ExpectIdent("table name");
    if (AcceptSymbol("(")) {
      st.columns.push_back(ExpectIdent("column name"));
      while (AcceptSymbol(",")) st.columns.push_back(ExpectIdent("column name"));
      ExpectSymbol(")");
    }
    ExpectWord("VALUES");
    do {
      ExpectSymbol("(");
      std::vector<Value> row{ParseLiteral()};
      while (AcceptSymbol(",")) row.push_back(ParseLiteral());
      ExpectSymbol(")");
      st.rows.push_back(std::move(row));
    } while (AcceptSymbol(","));
    return st;
  }

  UpdateStmt ParseUpdate() {
    UpdateStmt st;
    st.table = ExpectIdent("table name");
    ExpectWord("SET");
    do {
      std::string col = ExpectIdent("column name");
      ExpectSymbol("=");
      st.assignments.emplace_back(std::move(col), ParseLiteral());
    } while (AcceptSymbol(","));
    st.where = ParseWhere();
    return st;
  }

  DeleteStmt ParseDelete() {
    DeleteStmt st;
    ExpectKeyword("FROM");
    st.table = ExpectIdent("table name");
    st.where = ParseWhere();
    return st;
  }

  Statement ParseStatement() {
    if (IsKeyword("SELECT")) return SelectStmt{ParseSelect()};
    if (AcceptWord("INSERT")) return ParseInsert();
    if (AcceptWord("UPDATE")) return ParseUpdate();
    if (AcceptWord("DELETE")) return ParseDelete();
    if (AcceptWord("DROP")) {
      DropStmt st;
      if (AcceptWord("MATERIALIZED")) {
        ExpectWord("VIEW");
        st.mview = true;
      } else {
        ExpectWord("TABLE");
      }
      st.name = ExpectIdent("name");
      return st;
    }
    if (AcceptWord("CREATE")) {
      if (AcceptWord("TABLE")) return ParseCreateTable();
      ExpectWord("MATERIALIZED");
      ExpectWord("VIEW");
      if (AcceptWord("LOG")) {
        ExpectWord("ON");
        return CreateMlogStmt{ExpectIdent("table name")};
      }
      return ParseCreateMView();
    }
    Expected("statement");
  }

  void ExpectEnd() {
    AcceptSymbol(";");
    if (!AtEnd()) Expected("end of input");
  }

 private:
  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

}  // namespace

MiniQuery ParseMiniQuery(std::string_view text) {
  Parser p(text);
  MiniQuery q = p.ParseSelect();
  p.ExpectEnd();
  return q;
}

std::vector<Statement> ParseStatements(std::string_view text) {
  Parser p(text);
  std::vector<Statement> out;
  while (!p.AtEnd()) {
    out.push_back(p.ParseStatement());
    if (!p.AcceptSymbol(";") && !p.AtEnd()) p.Expected("';'");
  }
  return out;
}

}  // namespace mercury
