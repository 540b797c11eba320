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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mercury/catalog/schema.h"
#include "mercury/common/predicate.h"
#include "mercury/scan/expr.h"
#include "mercury/storage/tablet.h"
#include "mercury/vectors/aggregate.h"

namespace mercury {

struct ScanPlan {
  Snapshot snapshot;
  // Output columns for plain scans; empty means every column.
  std::vector<size_t> projection;
  // Conjunction of single-column comparisons, used for pruning and encoded
  // evaluation.
  std::vector<Comparison> predicates;
  // Evaluated after projection on decoded batches.
  std::optional<PredicateExpr> residual;
  std::vector<AggSpec> aggs;
  std::optional<size_t> group_by;
};

struct ScanStats {
  uint64_t blocks_total = 0;
  uint64_t blocks_pruned = 0;
  uint64_t blocks_sketch_answered = 0;
  uint64_t blocks_decoded = 0;
  uint64_t rows_merged_from_incremental = 0;

  std::string ToJson() const;
  bool operator==(const ScanStats&) const = default;
};

struct ScanResult {
  std::vector<Tuple> rows;
  ScanStats stats;
  // Group-by only: some block was not dictionary-coded and went through the
  // hash path.
  bool fell_back_to_hash = false;
  // Group-by only: rows whose group key was materialized from its dictionary
  // instead of being aggregated by code.
  uint64_t group_keys_decoded = 0;
};

// Resolves AggSpecs against the schema. kUnsupportedAgg for sum/avg over utf8.
std::vector<BoundAgg> BindAggs(const TableSchema& schema, std::span<const AggSpec> aggs);

// Filtered, projected rows in pk order.
ScanResult ExecuteScan(const ScanPlan& plan);
// One row of finalized aggregates.
ScanResult ExecuteAggPushdown(const ScanPlan& plan);
// (group key, aggregates...) rows ordered by group key.
ScanResult ExecuteGroupByPushdown(const ScanPlan& plan);
// Same results computed from the row-format baseline; kFormatUnavailable for
// column-mode tables.
ScanResult RowScanBaseline(const ScanPlan& plan);
// Reference executor: merge scan, row filter, then vector kernels.
ScanResult ExecuteWithoutPushdown(const ScanPlan& plan);

// Dispatches on the plan shape to one of the pushdown entry points.
ScanResult Execute(const ScanPlan& plan);

}  // namespace mercury
