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

#include "mercury/catalog/schema.h"

#include <set>

#include "mercury/common/error.h"

namespace mercury {

std::string_view StoreModeName(StoreMode mode) {
  switch (mode) {
    case StoreMode::kRow: return "row";
    case StoreMode::kColumn: return "column";
    case StoreMode::kRedundant: return "redundant";
  }
  return "column";
}

std::optional<StoreMode> ParseStoreMode(std::string_view name) {
  if (name == "row") return StoreMode::kRow;
  if (name == "column") return StoreMode::kColumn;
  if (name == "redundant") return StoreMode::kRedundant;
  return std::nullopt;
}

std::optional<size_t> TableSchema::ColumnIndex(std::string_view column) const {
  for (size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == column) return i;
  }
  return std::nullopt;
}

size_t TableSchema::RequireColumn(std::string_view column) const {
  auto idx = ColumnIndex(column);
  if (!idx) {
    throw Error(ErrorCode::kInvalidArgument, "unknown column '" + std::string(column) + "' in table " + name);
  }
  return *idx;
}

std::vector<size_t> TableSchema::PkIndices() const {
  std::vector<size_t> out;
  out.reserve(pk.size());
  for (const auto& k : pk) out.push_back(RequireColumn(k));
  return out;
}

std::vector<DataType> TableSchema::ColumnTypes() const {
  std::vector<DataType> out;
  out.reserve(columns.size());
  for (const auto& c : columns) out.push_back(c.type);
  return out;
}

namespace {

bool IsIdentifier(std::string_view s) {
  if (s.empty()) return false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' ||
              (i > 0 && c >= '0' && c <= '9');
    if (!ok) return false;
  }
  return true;
}

[[noreturn]] void Invalid(const std::string& msg) { throw Error(ErrorCode::kInvalidSchema, msg); }

}  // namespace

void ValidateSchema(const TableSchema& schema) {
  if (!IsIdentifier(schema.name)) Invalid("bad table name '" + schema.name + "'");
  if (schema.columns.empty()) Invalid("table " + schema.name + " has no columns");
  std::set<std::string> names;
  for (const auto& c : schema.columns) {
    if (!IsIdentifier(c.name)) Invalid("bad column name '" + c.name + "'");
    if (!names.insert(c.name).second) Invalid("duplicate column " + c.name);
  }
  if (schema.pk.empty()) Invalid("table " + schema.name + " has no primary key");
  std::set<std::string> pk_names;
  for (const auto& k : schema.pk) {
    auto idx = schema.ColumnIndex(k);
    if (!idx) Invalid("primary key column " + k + " does not exist");
    if (schema.columns[*idx].nullable) Invalid("primary key column " + k + " is nullable");
    if (!pk_names.insert(k).second) Invalid("primary key column " + k + " repeated");
  }
}

std::string_view AggFuncName(AggFunc func) {
  switch (func) {
    case AggFunc::kCountStar: return "count_star";
    case AggFunc::kCountCol: return "count_col";
    case AggFunc::kSum: return "sum";
    case AggFunc::kMin: return "min";
    case AggFunc::kMax: return "max";
    case AggFunc::kAvg: return "avg";
  }
  return "count_star";
}

std::optional<AggFunc> ParseAggFunc(std::string_view name) {
  for (AggFunc f : {AggFunc::kCountStar, AggFunc::kCountCol, AggFunc::kSum, AggFunc::kMin, AggFunc::kMax,
                    AggFunc::kAvg}) {
    if (AggFuncName(f) == name) return f;
  }
  return std::nullopt;
}

std::string_view RefreshPolicyName(RefreshPolicy policy) {
  return policy == RefreshPolicy::kFull ? "full" : "incremental";
}

std::optional<RefreshPolicy> ParseRefreshPolicy(std::string_view name) {
  if (name == "full") return RefreshPolicy::kFull;
  if (name == "incremental") return RefreshPolicy::kIncremental;
  return std::nullopt;
}

DataType AggResultType(AggFunc func, DataType input) {
  switch (func) {
    case AggFunc::kCountStar:
    case AggFunc::kCountCol: return DataType::kInt64;
    case AggFunc::kAvg: return DataType::kFloat64;
    default: return input;
  }
}

void ValidateMView(const MViewDef& def, const TableSchema& base) {
  if (def.kind != "Simple-MAV") {
    throw Error(ErrorCode::kUnsupported, "materialized view kind '" + def.kind + "' is not supported");
  }
  if (!IsIdentifier(def.name)) Invalid("bad view name '" + def.name + "'");
  if (def.select_items.empty()) Invalid("view " + def.name + " has no aggregates");
  std::set<std::string> outputs;
  for (const auto& g : def.group_by) {
    if (!base.ColumnIndex(g)) Invalid("group-by column " + g + " does not exist");
    if (!outputs.insert(g).second) Invalid("group-by column " + g + " repeated");
  }
  for (const auto& item : def.select_items) {
    if (!IsIdentifier(item.output_name)) Invalid("bad output name '" + item.output_name + "'");
    if (!outputs.insert(item.output_name).second) Invalid("duplicate output " + item.output_name);
    if (item.function == AggFunc::kCountStar) {
      if (item.column) Invalid("count_star takes no column");
      continue;
    }
    if (!item.column) Invalid(std::string(AggFuncName(item.function)) + " requires a column");
    auto idx = base.ColumnIndex(*item.column);
    if (!idx) Invalid("aggregate column " + *item.column + " does not exist");
    if ((item.function == AggFunc::kSum || item.function == AggFunc::kAvg) &&
        !IsNumeric(base.columns[*idx].type)) {
      throw Error(ErrorCode::kTypeMismatch, "cannot " + std::string(AggFuncName(item.function)) + " utf8 column " +
                                                *item.column);
    }
  }
}

std::vector<ColumnDef> MViewOutputColumns(const MViewDef& def, const TableSchema& base) {
  std::vector<ColumnDef> out;
  for (const auto& g : def.group_by) out.push_back(base.columns[base.RequireColumn(g)]);
  for (const auto& item : def.select_items) {
    DataType input = item.column ? base.columns[base.RequireColumn(*item.column)].type : DataType::kInt64;
    bool nullable = item.function != AggFunc::kCountStar && item.function != AggFunc::kCountCol;
    out.push_back({item.output_name, AggResultType(item.function, input), nullable});
  }
  return out;
}

}  // namespace mercury
