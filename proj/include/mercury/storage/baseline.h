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

#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mercury/catalog/schema.h"
#include "mercury/encoding/encoding.h"
#include "mercury/skipindex/index_tree.h"
#include "mercury/storage/sstable.h"
#include "mercury/vectors/column_batch.h"

namespace mercury {

struct BaselineOptions {
  // Rows are cut into blocks once their row images reach this many bytes.
  size_t block_target_bytes = 8192;
  // Maximum columns written by one compaction task.
  size_t split_budget = 16;
  EncodingOptions encoding;
};

// Partitions `columns` in order into groups of at most `budget`.
std::vector<std::vector<size_t>> VerticalSplitPlan(std::span<const size_t> columns, size_t budget);

// Row range shared by every column segment. Blocks are row-aligned across
// columns so per-column pruning results can be intersected.
struct BaselineBlock {
  uint32_t row_start = 0;
  uint32_t row_count = 0;
  Tuple first_pk;
  Tuple last_pk;
};

struct ColumnSegment {
  uint16_t column = 0;
  DataType type = DataType::kInt64;
  std::vector<EncodedBlock> blocks;
  IndexTree index;
};

// Columnar baseline: one encoded segment per column, each with a sketch index.
// Persisted as one column-format SSTable per vertical-split group.
class ColumnBaseline {
 public:
  // `rows` are live full images in pk order.
  static std::shared_ptr<const ColumnBaseline> Build(const TableSchema& schema, std::span<const Tuple> rows,
                                                     const BaselineOptions& options);

  // Column-format file layout after the header:
  //   block bytes for every segment in group order,
  //   index: per segment {column u16, type u8, block_count u32,
  //          per block {offset u64, row_count u32, encoding_id u8, sketch 40B}},
  //   footer.
  // Block bytes are {has_nulls u8, null bitmap if has_nulls, payload}.
  std::vector<std::vector<uint8_t>> SerializeGroups() const;
  static std::shared_ptr<const ColumnBaseline> Load(const TableSchema& schema,
                                                    std::span<const std::vector<uint8_t>> files);

  size_t row_count() const { return row_count_; }
  size_t block_count() const { return blocks_.size(); }
  size_t column_count() const { return segments_.size(); }
  const std::vector<BaselineBlock>& blocks() const { return blocks_; }
  const ColumnSegment& segment(size_t column) const { return segments_[column]; }
  const std::vector<std::vector<size_t>>& groups() const { return groups_; }
  const TableSchema& schema() const { return schema_; }

  // Decodes one block of one column, resolving inter-column sources.
  ColumnBatch DecodeColumn(size_t column, size_t block) const;
  // Full tuples of one block, in pk order.
  std::vector<Tuple> ReadBlockRows(size_t block) const;
  // Ordinal of the row holding `pk`, if any.
  std::optional<size_t> FindPk(const Tuple& pk) const;
  Tuple ReadRow(size_t ordinal) const;
  uint64_t encoded_bytes() const;

 private:
  void FinishLayout();

  TableSchema schema_;
  size_t row_count_ = 0;
  std::vector<BaselineBlock> blocks_;
  std::vector<ColumnSegment> segments_;
  std::vector<std::vector<size_t>> groups_;

  mutable std::once_flag pk_index_once_;
  mutable std::vector<std::string> pk_index_;  // sorted order-preserving pk keys
};

}  // namespace mercury
