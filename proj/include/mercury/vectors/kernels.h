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
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mercury/common/bitmap.h"
#include "mercury/common/predicate.h"
#include "mercury/vectors/aggregate.h"
#include "mercury/vectors/column_batch.h"

namespace mercury {

inline constexpr size_t kDefaultBatchSize = 1024;
inline constexpr uint32_t kArrayGroupByThreshold = 4096;

// Intersects the selection of every batch in `batches` with `keep`. Data is
// never moved; only flags change.
void Filter(std::span<ColumnBatch> batches, const Bitmap& keep);

// Vectorized `column <op> literal` over the active rows; inactive and NULL
// rows yield 0.
Bitmap EvaluateComparison(const ColumnBatch& batch, CompareOp op, const Value& literal);

// Order-preserving key encoding: memcmp order of the output equals tuple
// order with NULL first.
//   per column: 0x00 for NULL, else 0x01 followed by
//   int64   8 bytes big-endian with the sign bit flipped
//   float64 8 bytes big-endian of the IEEE bits, sign-flipped (negatives fully inverted)
//   utf8    bytes with 0x00 escaped as 0x00 0xFF, terminated by 0x00 0x00
void AppendSortKey(const Value& value, DataType type, std::string* out);
std::vector<std::string> EncodeSortKey(std::span<const ColumnBatch> columns);
std::string EncodeSortKey(const Tuple& tuple, std::span<const DataType> types);

struct GroupTable {
  std::vector<Tuple> keys;
  std::vector<std::vector<AggState>> states;

  size_t size() const { return keys.size(); }
  // Key columns materialized column-wise (utf8 as kVarContinuous).
  std::vector<ColumnBatch> KeyBatches(std::span<const DataType> key_types) const;
  // Key values followed by finalized aggregates.
  std::vector<Tuple> Rows(std::span<const BoundAgg> aggs) const;
};

// Hash aggregation. Groups are emitted in first-seen order.
class HashGroupBy {
 public:
  HashGroupBy(std::vector<DataType> key_types, std::vector<BoundAgg> aggs);

  // `inputs[i]` feeds aggs[i] (any batch of the right length for count_star).
  // Only rows active in keys[0] are consumed.
  void Consume(std::span<const ColumnBatch> keys, std::span<const ColumnBatch> inputs);
  GroupTable Finish() &&;

 private:
  std::vector<DataType> key_types_;
  std::vector<BoundAgg> aggs_;
  std::unordered_map<std::string, uint32_t> index_;
  GroupTable table_;
};

// Aggregation keyed by dictionary code; slots live in a flat array.
class ArrayGroupBy {
 public:
  struct Group {
    uint32_t code = 0;
    bool is_null = false;
    std::vector<AggState> states;
  };

  // Throws kInvalidArgument when dict_size exceeds kArrayGroupByThreshold.
  ArrayGroupBy(uint32_t dict_size, std::vector<BoundAgg> aggs);

  // Rows with `nulls` set go to the NULL group regardless of their code.
  // `flags` carries the selection shared by codes and inputs.
  void Consume(std::span<const uint32_t> codes, const Bitmap* nulls, const BatchFlags& flags,
               std::span<const ColumnBatch> inputs);
  // Non-empty groups in code order, NULL group last.
  std::vector<Group> Finish() &&;

 private:
  uint32_t dict_size_;
  std::vector<BoundAgg> aggs_;
  std::vector<int64_t> rows_;
  std::vector<AggState> slots_;  // (dict_size + 1) x aggs
};

// Inner equi-join over fixed-width keys. Returns (build_row, probe_row) pairs
// in probe order. Rows with a NULL key never match.
std::vector<std::pair<uint32_t, uint32_t>> HashJoin(std::span<const ColumnBatch> build_keys,
                                                    std::span<const ColumnBatch> probe_keys);

}  // namespace mercury
