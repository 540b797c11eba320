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

#include "mercury/cli/commands.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <set>
#include <sstream>

#include "mercury/cli/csv.h"
#include "mercury/common/error.h"
#include "mercury/common/file_io.h"
#include "mercury/mview/value_json.h"

namespace mercury {

using ordered_json = nlohmann::ordered_json;

std::optional<ExecPath> ParseExecPath(std::string_view name) {
  if (name == "pushdown") return ExecPath::kPushdown;
  if (name == "row") return ExecPath::kRow;
  if (name == "executor") return ExecPath::kExecutor;
  return std::nullopt;
}

Value CoerceLiteral(const Value& literal, DataType type, const std::string& column) {
  if (IsNull(literal)) return literal;
  switch (type) {
    case DataType::kInt64:
      if (std::holds_alternative<int64_t>(literal)) return literal;
      break;
    case DataType::kFloat64:
      if (std::holds_alternative<double>(literal)) return literal;
      if (std::holds_alternative<int64_t>(literal)) return static_cast<double>(std::get<int64_t>(literal));
      break;
    case DataType::kUtf8:
      if (std::holds_alternative<std::string>(literal)) return literal;
      break;
  }
  throw Error(ErrorCode::kTypeMismatch, "literal " + ValueToString(literal) + " does not fit " +
                                            std::string(DataTypeName(type)) + " column " + column);
}

namespace {

std::vector<Comparison> BindConditions(const std::vector<Condition>& conds, const TableSchema& schema) {
  std::vector<Comparison> out;
  for (const auto& c : conds) {
    Comparison cmp;
    cmp.column = schema.RequireColumn(c.column);
    cmp.op = c.op;
    cmp.literal = CoerceLiteral(c.literal, schema.columns[cmp.column].type, c.column);
    out.push_back(std::move(cmp));
  }
  return out;
}

std::vector<std::string> OutputLabels(const MiniQuery& q, const std::vector<ColumnDef>& columns) {
  std::vector<std::string> out;
  for (const auto& item : q.items) {
    if (item.kind == SelectItem::Kind::kStar) {
      for (const auto& c : columns) out.push_back(c.name);
    } else {
      out.push_back(item.Label());
    }
  }
  return out;
}

ScanResult RunPlan(const ScanPlan& plan, ExecPath path) {
  switch (path) {
    case ExecPath::kPushdown: return Execute(plan);
    case ExecPath::kRow: return RowScanBaseline(plan);
    case ExecPath::kExecutor: return ExecuteWithoutPushdown(plan);
  }
  return Execute(plan);
}

QueryOutput QueryView(Database& db, const MiniQuery& q, const QueryOptions& options) {
  MaterializedView& mv = db.mview(q.table);
  const TableSchema& base = db.table(mv.def().base_table).schema();
  TableSchema view;
  view.name = mv.def().name;
  view.columns = MViewOutputColumns(mv.def(), base);
  for (const auto& item : q.items) {
    if (item.kind == SelectItem::Kind::kAgg) {
      throw Error(ErrorCode::kUnsupported, "aggregates over materialized view " + view.name);
    }
  }
  if (q.group_by) throw Error(ErrorCode::kUnsupported, "GROUP BY over materialized view " + view.name);

  std::vector<size_t> cols;
  for (const auto& item : q.items) {
    if (item.kind == SelectItem::Kind::kStar) {
      for (size_t c = 0; c < view.columns.size(); ++c) cols.push_back(c);
    } else {
      cols.push_back(view.RequireColumn(item.column));
    }
  }
  auto preds = BindConditions(q.where, view);
  std::vector<Tuple> rows =
      options.realtime ? mv.RealtimeRead(db.table(mv.def().base_table).TakeSnapshot()) : mv.Read();
  QueryOutput out;
  out.columns = OutputLabels(q, view.columns);
  for (const auto& r : rows) {
    bool pass = std::all_of(preds.begin(), preds.end(), [&](const Comparison& p) { return p.Matches(r[p.column]); });
    if (!pass) continue;
    Tuple t;
    for (size_t c : cols) t.push_back(r[c]);
    out.rows.push_back(std::move(t));
  }
  return out;
}

}  // namespace

ScanPlan BindQuery(const MiniQuery& q, const Snapshot& snapshot, std::vector<size_t>* output_map) {
  const TableSchema& schema = *snapshot.schema;
  ScanPlan plan;
  plan.snapshot = snapshot;
  plan.predicates = BindConditions(q.where, schema);
  std::vector<size_t> map;
  if (q.group_by) plan.group_by = schema.RequireColumn(*q.group_by);
  bool has_agg = std::any_of(q.items.begin(), q.items.end(),
                             [](const SelectItem& i) { return i.kind == SelectItem::Kind::kAgg; });
  if (has_agg || plan.group_by) {
    for (const auto& item : q.items) {
      if (item.kind == SelectItem::Kind::kAgg) {
        AggSpec spec;
        spec.function = item.func;
        if (item.func != AggFunc::kCountStar) {
          schema.RequireColumn(item.column);
          spec.column = item.column;
        }
        spec.output_name = item.Label();
        map.push_back((plan.group_by ? 1 : 0) + plan.aggs.size());
        plan.aggs.push_back(std::move(spec));
      } else {
        // The parser only lets the group column through here.
        map.push_back(0);
      }
    }
    BindAggs(schema, plan.aggs);
  } else {
    for (const auto& item : q.items) {
      if (item.kind == SelectItem::Kind::kStar) {
        for (size_t c = 0; c < schema.columns.size(); ++c) {
          map.push_back(plan.projection.size());
          plan.projection.push_back(c);
        }
      } else {
        map.push_back(plan.projection.size());
        plan.projection.push_back(schema.RequireColumn(item.column));
      }
    }
  }
  if (output_map) *output_map = std::move(map);
  return plan;
}

QueryOutput RunQuery(Database& db, const MiniQuery& q, const QueryOptions& options) {
  if (db.catalog().HasMView(q.table)) return QueryView(db, q, options);
  Tablet& tablet = db.table(q.table);
  std::vector<size_t> map;
  ScanPlan plan = BindQuery(q, tablet.TakeSnapshot(), &map);
  ScanResult res = RunPlan(plan, options.path);
  QueryOutput out;
  out.columns = OutputLabels(q, tablet.schema().columns);
  out.stats = res.stats;
  for (auto& r : res.rows) {
    Tuple t;
    t.reserve(map.size());
    for (size_t i : map) t.push_back(r[i]);
    out.rows.push_back(std::move(t));
  }
  return out;
}

QueryOutput RunQuery(Database& db, std::string_view text, const QueryOptions& options) {
  return RunQuery(db, ParseMiniQuery(text), options);
}

std::string FormatText(const QueryOutput& out) {
  std::vector<size_t> width(out.columns.size());
  std::vector<std::vector<std::string>> cells;
  for (size_t c = 0; c < out.columns.size(); ++c) width[c] = out.columns[c].size();
  for (const auto& r : out.rows) {
    std::vector<std::string> line;
    for (size_t c = 0; c < r.size(); ++c) {
      line.push_back(ValueToString(r[c]));
      width[c] = std::max(width[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](std::ostringstream& os, const std::vector<std::string>& line) {
    for (size_t c = 0; c < line.size(); ++c) {
      if (c) os << " | ";
      os << line[c];
      if (c + 1 < line.size()) os << std::string(width[c] - line[c].size(), ' ');
    }
    os << "\n";
  };
  std::ostringstream os;
  emit(os, out.columns);
  for (size_t c = 0; c < width.size(); ++c) {
    if (c) os << "-+-";
    os << std::string(width[c], '-');
  }
  os << "\n";
  for (const auto& line : cells) emit(os, line);
  return os.str();
}

std::string FormatJsonLines(const QueryOutput& out) {
  std::string s;
  for (const auto& r : out.rows) {
    ordered_json obj = ordered_json::object();
    for (size_t c = 0; c < r.size(); ++c) obj[out.columns[c]] = ValueToJson(r[c]);
    s += obj.dump();
    s += "\n";
  }
  return s;
}

IngestFormat GuessIngestFormat(std::string_view path) {
  auto ends = [&](std::string_view suffix) {
    return path.size() >= suffix.size() && path.substr(path.size() - suffix.size()) == suffix;
  };
  return ends(".jsonl") || ends(".json") || ends(".ndjson") ? IngestFormat::kJsonl : IngestFormat::kCsv;
}

namespace {

[[noreturn]] void FailCell(size_t line, size_t column, const std::string& what) {
  throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

Value ParseCell(const std::optional<std::string>& field, const ColumnDef& col, size_t line, size_t column) {
  if (!field) {
    if (!col.nullable) FailCell(line, column, "empty value for NOT NULL column " + col.name);
    return std::monostate{};
  }
  const std::string& s = *field;
  switch (col.type) {
    case DataType::kInt64: {
      int64_t v = 0;
      const char* b = s.data();
      const char* e = s.data() + s.size();
      if (b != e && *b == '+') ++b;
      auto [p, ec] = std::from_chars(b, e, v);
      if (s.empty() || ec != std::errc() || p != e) FailCell(line, column, "'" + s + "' is not an int64");
      return v;
    }
    case DataType::kFloat64: {
      char* end = nullptr;
      double v = s.empty() ? 0 : std::strtod(s.c_str(), &end);
      if (s.empty() || end != s.c_str() + s.size() || std::isspace(static_cast<unsigned char>(s[0]))) {
        FailCell(line, column, "'" + s + "' is not a float64");
      }
      if (std::isnan(v)) FailCell(line, column, "NaN is not storable");
      return v;
    }
    case DataType::kUtf8: return s;
  }
  return std::monostate{};
}

struct ParsedRecord {
  size_t line = 0;
  Tuple values;
};

std::vector<ParsedRecord> ParseCsvRecords(const TableSchema& schema, std::string_view text) {
  auto records = ParseCsv(text);
  if (records.empty()) throw Error(ErrorCode::kSchemaMismatch, "line 1: missing header row");
  const auto& header = records.front();
  std::vector<size_t> target;
  std::set<size_t> seen;
  for (const auto& f : header.fields) {
    auto idx = f ? schema.ColumnIndex(*f) : std::nullopt;
    if (!idx || !seen.insert(*idx).second) {
      throw Error(ErrorCode::kSchemaMismatch, "line " + std::to_string(header.line) + ": header column '" +
                                                  f.value_or("") + "' does not match table " + schema.name);
    }
    target.push_back(*idx);
  }
  if (seen.size() != schema.columns.size()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "line " + std::to_string(header.line) + ": header lacks columns of table " + schema.name);
  }
  std::vector<ParsedRecord> out;
  for (size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != target.size()) {
      FailCell(rec.line, std::min(rec.fields.size(), target.size()) + 1,
               "expected " + std::to_string(target.size()) + " fields, found " + std::to_string(rec.fields.size()));
    }
    ParsedRecord pr;
    pr.line = rec.line;
    pr.values.resize(schema.columns.size());
    for (size_t f = 0; f < target.size(); ++f) {
      pr.values[target[f]] = ParseCell(rec.fields[f], schema.columns[target[f]], rec.line, f + 1);
    }
    out.push_back(std::move(pr));
  }
  return out;
}

std::vector<ParsedRecord> ParseJsonlRecords(const TableSchema& schema, std::string_view text) {
  std::vector<ParsedRecord> out;
  size_t line = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (raw.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error& e) {
      FailCell(line, e.byte, "invalid JSON");
    }
    if (!obj.is_object()) FailCell(line, 1, "expected a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!schema.ColumnIndex(it.key())) {
        throw Error(ErrorCode::kSchemaMismatch,
                    "line " + std::to_string(line) + ": unknown column '" + it.key() + "' for table " + schema.name);
      }
    }
    ParsedRecord pr;
    pr.line = line;
    for (size_t c = 0; c < schema.columns.size(); ++c) {
      const auto& col = schema.columns[c];
      auto it = obj.find(col.name);
      if (it == obj.end() || it->is_null()) {
        if (!col.nullable) FailCell(line, c + 1, "missing value for NOT NULL column " + col.name);
        pr.values.push_back(std::monostate{});
        continue;
      }
      try {
        pr.values.push_back(ValueFromJson(*it, col.type));
      } catch (const Error& e) {
        FailCell(line, c + 1, std::string(e.what()));
      }
    }
    out.push_back(std::move(pr));
  }
  return out;
}

}  // namespace

size_t IngestText(Database& db, const std::string& table, std::string_view text, IngestFormat format) {
  Tablet& tablet = db.table(table);
  const TableSchema& schema = tablet.schema();
  auto records = format == IngestFormat::kCsv ? ParseCsvRecords(schema, text) : ParseJsonlRecords(schema, text);
  auto pk_idx = schema.PkIndices();
  std::set<Tuple, TupleLess> keys;
  for (const auto& rec : records) {
    Tuple pk;
    for (size_t c : pk_idx) pk.push_back(rec.values[c]);
    if (!keys.insert(pk).second || tablet.Lookup(pk)) {
      throw Error(ErrorCode::kDuplicateKey, "line " + std::to_string(rec.line) + ": primary key " + TupleToString(pk));
    }
  }
  for (auto& rec : records) {
    try {
      tablet.Insert(std::move(rec.values));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(rec.line) + ": " + e.what());
    }
  }
  return records.size();
}

size_t IngestFile(Database& db, const std::string& table, const std::string& path, std::optional<IngestFormat> format) {
  return IngestText(db, table, ReadFileText(path), format.value_or(GuessIngestFormat(path)));
}

std::string RunAdmin(Database& db, std::string_view verb, const std::string& target, std::optional<RefreshPolicy> mode) {
  ordered_json j;
  if (verb == "compact-minor") {
    uint64_t id = db.CompactMinor(target);
    j["table"] = target;
    j["sstable_id"] = id;
    j["generation"] = db.table(target).generation();
  } else if (verb == "compact-major") {
    uint64_t version = db.CompactMajor(target);
    j["table"] = target;
    j["baseline_version"] = version;
    j["generation"] = db.table(target).generation();
  } else if (verb == "refresh") {
    return db.Refresh(target, mode).ToJson();
  } else if (verb == "purge-mlog") {
    size_t purged = db.PurgeMlog(target);
    j["table"] = target;
    j["purged"] = purged;
  } else if (verb == "stats") {
    return db.TableStats(target);
  } else {
    throw Error(ErrorCode::kParseError, "unknown admin verb '" + std::string(verb) + "'");
  }
  return j.dump();
}

namespace {

std::vector<Tuple> MatchingPks(Tablet& tablet, const std::vector<Condition>& where) {
  const TableSchema& schema = tablet.schema();
  ScanPlan plan;
  plan.snapshot = tablet.TakeSnapshot();
  plan.predicates = BindConditions(where, schema);
  plan.projection = schema.PkIndices();
  return ExecuteScan(plan).rows;
}

std::string StatusLine(const std::string& text, bool json) {
  if (!json) return text + "\n";
  ordered_json j;
  j["status"] = text;
  return j.dump() + "\n";
}

}  // namespace

std::string ExecStatements(Database& db, std::string_view text, bool json) {
  std::string out;
  for (auto& stmt : ParseStatements(text)) {
    if (auto* s = std::get_if<CreateTableStmt>(&stmt)) {
      db.CreateTable(s->schema);
      out += StatusLine("created table " + s->schema.name, json);
    } else if (auto* s = std::get_if<CreateMlogStmt>(&stmt)) {
      db.EnableMlog(s->table);
      out += StatusLine("created materialized view log on " + s->table, json);
    } else if (auto* s = std::get_if<CreateMViewStmt>(&stmt)) {
      MViewDef def = s->def;
      if (!s->policy_given) def.refresh_policy = db.mlog(def.base_table) ? RefreshPolicy::kIncremental : RefreshPolicy::kFull;
      db.CreateMView(def);
      out += StatusLine("created materialized view " + def.name, json);
    } else if (auto* s = std::get_if<InsertStmt>(&stmt)) {
      Tablet& tablet = db.table(s->table);
      const TableSchema& schema = tablet.schema();
      std::vector<size_t> target;
      for (const auto& c : s->columns) target.push_back(schema.RequireColumn(c));
      if (target.empty()) {
        for (size_t c = 0; c < schema.columns.size(); ++c) target.push_back(c);
      }
      for (const auto& row : s->rows) {
        if (row.size() != target.size()) {
          throw Error(ErrorCode::kInvalidArgument, "insert has " + std::to_string(row.size()) + " values for " +
                                                       std::to_string(target.size()) + " columns");
        }
        Tuple values(schema.columns.size());
        for (size_t i = 0; i < target.size(); ++i) {
          values[target[i]] = CoerceLiteral(row[i], schema.columns[target[i]].type, schema.columns[target[i]].name);
        }
        tablet.Insert(std::move(values));
      }
      out += StatusLine("inserted " + std::to_string(s->rows.size()), json);
    } else if (auto* s = std::get_if<UpdateStmt>(&stmt)) {
      Tablet& tablet = db.table(s->table);
      const TableSchema& schema = tablet.schema();
      std::vector<std::pair<size_t, Value>> assignments;
      for (const auto& [col, v] : s->assignments) {
        size_t c = schema.RequireColumn(col);
        assignments.emplace_back(c, CoerceLiteral(v, schema.columns[c].type, col));
      }
      auto pks = MatchingPks(tablet, s->where);
      for (const auto& pk : pks) tablet.Update(pk, assignments);
      out += StatusLine("updated " + std::to_string(pks.size()), json);
    } else if (auto* s = std::get_if<DeleteStmt>(&stmt)) {
      Tablet& tablet = db.table(s->table);
      auto pks = MatchingPks(tablet, s->where);
      for (const auto& pk : pks) tablet.Delete(pk);
      out += StatusLine("deleted " + std::to_string(pks.size()), json);
    } else if (auto* s = std::get_if<DropStmt>(&stmt)) {
      if (s->mview) {
        db.DropMView(s->name);
        out += StatusLine("dropped materialized view " + s->name, json);
      } else {
        db.DropTable(s->name);
        out += StatusLine("dropped table " + s->name, json);
      }
    } else if (auto* s = std::get_if<SelectStmt>(&stmt)) {
      QueryOutput res = RunQuery(db, s->query);
      out += json ? FormatJsonLines(res) : FormatText(res);
    }
  }
  return out;
}

}  // namespace mercury
