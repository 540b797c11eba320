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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mercury/common/value.h"

namespace mercury {

struct ColumnDef {
  std::string name;
  DataType type = DataType::kInt64;
  bool nullable = true;

  bool operator==(const ColumnDef&) const = default;
};

// Physical layout of the baseline produced by major compaction.
enum class StoreMode : uint8_t { kRow, kColumn, kRedundant };

std::string_view StoreModeName(StoreMode mode);
std::optional<StoreMode> ParseStoreMode(std::string_view name);

struct TableSchema {
  std::string name;
  std::vector<ColumnDef> columns;
  std::vector<std::string> pk;
  StoreMode store_mode = StoreMode::kColumn;

  bool operator==(const TableSchema&) const = default;

  std::optional<size_t> ColumnIndex(std::string_view column) const;
  // Throws kInvalidArgument when the column does not exist.
  size_t RequireColumn(std::string_view column) const;
  std::vector<size_t> PkIndices() const;
  std::vector<DataType> ColumnTypes() const;

  bool HasColumnBaseline() const { return store_mode != StoreMode::kRow; }
  bool HasRowBaseline() const { return store_mode != StoreMode::kColumn; }
};

// Throws kInvalidSchema describing the first violated rule.
void ValidateSchema(const TableSchema& schema);

enum class AggFunc : uint8_t { kCountStar, kCountCol, kSum, kMin, kMax, kAvg };

std::string_view AggFuncName(AggFunc func);
std::optional<AggFunc> ParseAggFunc(std::string_view name);

struct AggSpec {
  AggFunc function = AggFunc::kCountStar;
  std::optional<std::string> column;
  std::string output_name;

  bool operator==(const AggSpec&) const = default;
};

enum class RefreshPolicy : uint8_t { kFull, kIncremental };

std::string_view RefreshPolicyName(RefreshPolicy policy);
std::optional<RefreshPolicy> ParseRefreshPolicy(std::string_view name);

struct MViewDef {
  std::string name;
  std::string base_table;
  std::string kind = "Simple-MAV";
  std::vector<AggSpec> select_items;
  std::vector<std::string> group_by;
  RefreshPolicy refresh_policy = RefreshPolicy::kIncremental;

  bool operator==(const MViewDef&) const = default;
};

// Checks `def` against the base schema; kUnsupported for non Simple-MAV kinds,
// kInvalidSchema for malformed aggregate lists.
void ValidateMView(const MViewDef& def, const TableSchema& base);

// Logical container schema: group-by columns followed by one column per
// aggregate output.
std::vector<ColumnDef> MViewOutputColumns(const MViewDef& def, const TableSchema& base);

// Result type of an aggregate applied to a column of `input` type.
DataType AggResultType(AggFunc func, DataType input);

}  // namespace mercury
