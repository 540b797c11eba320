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

#include "mercury/storage/baseline.h"

#include <algorithm>
#include <map>

#include "mercury/common/error.h"
#include "mercury/skipindex/sketch.h"
#include "mercury/vectors/kernels.h"

namespace mercury {

std::vector<std::vector<size_t>> VerticalSplitPlan(std::span<const size_t> columns, size_t budget) {
  if (budget == 0) throw Error(ErrorCode::kInvalidArgument, "split budget must be at least 1");
  std::vector<std::vector<size_t>> groups;
  for (size_t i = 0; i < columns.size(); i += budget) {
    groups.emplace_back(columns.begin() + static_cast<ptrdiff_t>(i),
                        columns.begin() + static_cast<ptrdiff_t>(std::min(columns.size(), i + budget)));
  }
  return groups;
}

namespace {

size_t RowImageBytes(const Tuple& row) {
  size_t bytes = 0;
  for (const auto& v : row) {
    if (const auto* s = std::get_if<std::string>(&v)) {
      bytes += 4 + s->size();
    } else {
      bytes += 8;
    }
  }
  return bytes;
}

Tuple PkOf(const Tuple& row, std::span<const size_t> pk_idx) {
  Tuple pk;
  pk.reserve(pk_idx.size());
  for (size_t k : pk_idx) pk.push_back(row[k]);
  return pk;
}

}  // namespace

std::shared_ptr<const ColumnBaseline> ColumnBaseline::Build(const TableSchema& schema, std::span<const Tuple> rows,
                                                            const BaselineOptions& options) {
  auto base = std::make_shared<ColumnBaseline>();
  base->schema_ = schema;
  base->row_count_ = rows.size();
  const size_t ncols = schema.columns.size();
  auto pk_idx = schema.PkIndices();

  for (size_t start = 0; start < rows.size();) {
    size_t end = start, bytes = 0;
    while (end < rows.size() && bytes < options.block_target_bytes) bytes += RowImageBytes(rows[end++]);
    BaselineBlock b;
    b.row_start = static_cast<uint32_t>(start);
    b.row_count = static_cast<uint32_t>(end - start);
    b.first_pk = PkOf(rows[start], pk_idx);
    b.last_pk = PkOf(rows[end - 1], pk_idx);
    base->blocks_.push_back(std::move(b));
    start = end;
  }

  std::vector<size_t> all(ncols);
  for (size_t c = 0; c < ncols; ++c) all[c] = c;
  base->groups_ = VerticalSplitPlan(all, options.split_budget);
  base->segments_.resize(ncols);
  for (size_t c = 0; c < ncols; ++c) {
    base->segments_[c].column = static_cast<uint16_t>(c);
    base->segments_[c].type = schema.columns[c].type;
    base->segments_[c].blocks.reserve(base->blocks_.size());
  }

  std::vector<Value> cells;
  for (const auto& block : base->blocks_) {
    std::vector<ColumnBatch> cols;
    cols.reserve(ncols);
    for (size_t c = 0; c < ncols; ++c) {
      cells.clear();
      for (size_t r = block.row_start; r < block.row_start + block.row_count; ++r) cells.push_back(rows[r][c]);
      cols.push_back(ColumnBatch::FromValues(schema.columns[c].type, cells));
    }
    // Each group is encoded on its own; inter-column sources stay inside it.
    for (const auto& group : base->groups_) {
      EncodingOptions eo = options.encoding;
      eo.intercol_first_source = group.front();
      for (size_t c : group) base->segments_[c].blocks.push_back(EncodeBest(cols, c, eo));
    }
  }
  base->FinishLayout();
  return base;
}

void ColumnBaseline::FinishLayout() {
  for (auto& seg : segments_) {
    std::vector<Sketch> leaves;
    leaves.reserve(seg.blocks.size());
    for (const auto& b : seg.blocks) leaves.push_back(b.stats);
    seg.index = IndexTree(std::move(leaves));
  }
}

std::vector<std::vector<uint8_t>> ColumnBaseline::SerializeGroups() const {
  std::vector<std::vector<uint8_t>> files;
  for (const auto& group : groups_) {
    ByteWriter w;
    WriteSSTableHeader(SSTableFormat::kColumn, static_cast<uint16_t>(group.size()), &w);
    std::vector<std::vector<uint64_t>> offsets(group.size());
    for (size_t g = 0; g < group.size(); ++g) {
      for (const auto& b : segments_[group[g]].blocks) {
        offsets[g].push_back(w.size());
        bool has_nulls = !b.null_bitmap.NoneSet();
        w.PutU8(has_nulls ? 1 : 0);
        if (has_nulls) w.PutBytes(b.null_bitmap.ToBytes());
        w.PutBytes(b.payload_bytes());
      }
    }
    uint64_t index_offset = w.size();
    for (size_t g = 0; g < group.size(); ++g) {
      const auto& seg = segments_[group[g]];
      w.PutU16(seg.column);
      w.PutU8(static_cast<uint8_t>(seg.type));
      w.PutU32(static_cast<uint32_t>(seg.blocks.size()));
      for (size_t i = 0; i < seg.blocks.size(); ++i) {
        const auto& b = seg.blocks[i];
        w.PutU64(offsets[g][i]);
        w.PutU32(b.row_count);
        w.PutU8(static_cast<uint8_t>(b.encoding_id));
        SerializeSketch(b.stats, &w);
      }
    }
    WriteSSTableFooter(index_offset, &w);
    files.push_back(w.Release());
  }
  return files;
}

std::shared_ptr<const ColumnBaseline> ColumnBaseline::Load(const TableSchema& schema,
                                                           std::span<const std::vector<uint8_t>> files) {
  auto base = std::make_shared<ColumnBaseline>();
  base->schema_ = schema;
  const size_t ncols = schema.columns.size();
  base->segments_.resize(ncols);
  std::vector<bool> seen(ncols, false);

  for (const auto& file : files) {
    uint64_t index_offset = ReadSSTableFooter(file);
    ByteReader header(file);
    auto [format, count] = ReadSSTableHeader(&header);
    if (format != SSTableFormat::kColumn) throw Error(ErrorCode::kCorruption, "expected a column-format sstable");
    ByteReader index(std::span<const uint8_t>(file).subspan(index_offset, file.size() - kSSTableFooterBytes -
                                                                              index_offset));
    struct Pending {
      size_t column;
      uint64_t offset;
      uint32_t rows;
      uint8_t encoding;
      Sketch sketch;
    };
    std::vector<Pending> pending;
    std::vector<size_t> group;
    for (uint16_t s = 0; s < count; ++s) {
      uint16_t column = index.GetU16();
      uint8_t type = index.GetU8();
      if (column >= ncols || seen[column]) throw Error(ErrorCode::kCorruption, "bad or repeated column segment");
      if (type != static_cast<uint8_t>(schema.columns[column].type)) {
        throw Error(ErrorCode::kSchemaMismatch, "segment type differs from schema for column " +
                                                    schema.columns[column].name);
      }
      seen[column] = true;
      group.push_back(column);
      auto& seg = base->segments_[column];
      seg.column = column;
      seg.type = schema.columns[column].type;
      uint32_t blocks = index.GetU32();
      for (uint32_t i = 0; i < blocks; ++i) {
        Pending p;
        p.column = column;
        p.offset = index.GetU64();
        p.rows = index.GetU32();
        p.encoding = index.GetU8();
        p.sketch = DeserializeSketch(seg.type, &index);
        if (p.encoding >= kEncodingCount) throw Error(ErrorCode::kCorruption, "unknown encoding id");
        pending.push_back(std::move(p));
      }
    }
    base->groups_.push_back(group);
    for (size_t i = 0; i < pending.size(); ++i) {
      const auto& p = pending[i];
      uint64_t end = i + 1 < pending.size() ? pending[i + 1].offset : index_offset;
      if (p.offset < kSSTableHeaderBytes || end < p.offset || end > index_offset) {
        throw Error(ErrorCode::kCorruption, "block offsets out of order");
      }
      ByteReader blk(std::span<const uint8_t>(file).subspan(p.offset, end - p.offset));
      EncodedBlock b;
      b.encoding_id = static_cast<EncodingId>(p.encoding);
      b.type = schema.columns[p.column].type;
      b.row_count = p.rows;
      bool has_nulls = blk.GetU8() != 0;
      b.null_bitmap = has_nulls ? Bitmap::FromBytes(blk.GetBytes((p.rows + 7) / 8), p.rows) : Bitmap(p.rows);
      auto payload = blk.GetBytes(blk.remaining());
      b.payload = std::make_shared<const std::vector<uint8_t>>(payload.begin(), payload.end());
      b.stats = p.sketch;
      base->segments_[p.column].blocks.push_back(std::move(b));
    }
  }
  for (size_t c = 0; c < ncols; ++c) {
    if (!seen[c]) throw Error(ErrorCode::kCorruption, "baseline lacks column " + schema.columns[c].name);
  }
  std::sort(base->groups_.begin(), base->groups_.end());

  size_t nblocks = base->segments_.empty() ? 0 : base->segments_[0].blocks.size();
  for (const auto& seg : base->segments_) {
    if (seg.blocks.size() != nblocks) throw Error(ErrorCode::kCorruption, "column segments disagree on block count");
  }
  auto pk_idx = schema.PkIndices();
  uint32_t start = 0;
  for (size_t b = 0; b < nblocks; ++b) {
    uint32_t rows = base->segments_[0].blocks[b].row_count;
    for (const auto& seg : base->segments_) {
      if (seg.blocks[b].row_count != rows) throw Error(ErrorCode::kCorruption, "blocks are not row-aligned");
    }
    BaselineBlock blk;
    blk.row_start = start;
    blk.row_count = rows;
    base->blocks_.push_back(blk);
    start += rows;
  }
  base->row_count_ = start;
  for (size_t b = 0; b < nblocks; ++b) {
    auto& blk = base->blocks_[b];
    std::vector<ColumnBatch> pk_cols;
    for (size_t k : pk_idx) pk_cols.push_back(base->DecodeColumn(k, b));
    for (const auto& col : pk_cols) {
      blk.first_pk.push_back(col.GetValue(0));
      blk.last_pk.push_back(col.GetValue(blk.row_count - 1));
    }
  }
  // utf8 bounds are truncated on disk; rebuild them from the data.
  for (size_t c = 0; c < ncols; ++c) {
    if (schema.columns[c].type != DataType::kUtf8) continue;
    for (size_t b = 0; b < nblocks; ++b) base->segments_[c].blocks[b].stats = SketchOf(base->DecodeColumn(c, b));
  }
  base->FinishLayout();
  return base;
}

ColumnBatch ColumnBaseline::DecodeColumn(size_t column, size_t block) const {
  return Decode(segments_[column].blocks[block],
                [this, column, block](uint16_t source) -> ColumnBatch {
                  if (source >= column) throw Error(ErrorCode::kCorruption, "inter-column source is not earlier");
                  return DecodeColumn(source, block);
                });
}

std::vector<Tuple> ColumnBaseline::ReadBlockRows(size_t block) const {
  std::vector<ColumnBatch> cols;
  cols.reserve(segments_.size());
  for (size_t c = 0; c < segments_.size(); ++c) cols.push_back(DecodeColumn(c, block));
  std::vector<Tuple> rows(blocks_[block].row_count);
  for (size_t r = 0; r < rows.size(); ++r) {
    rows[r].reserve(cols.size());
    for (const auto& col : cols) rows[r].push_back(col.GetValue(r));
  }
  return rows;
}

std::optional<size_t> ColumnBaseline::FindPk(const Tuple& pk) const {
  auto pk_idx = schema_.PkIndices();
  std::vector<DataType> pk_types;
  for (size_t k : pk_idx) pk_types.push_back(schema_.columns[k].type);
  std::call_once(pk_index_once_, [&] {
    pk_index_.reserve(row_count_);
    for (size_t b = 0; b < blocks_.size(); ++b) {
      std::vector<ColumnBatch> cols;
      for (size_t k : pk_idx) cols.push_back(DecodeColumn(k, b));
      auto keys = EncodeSortKey(cols);
      pk_index_.insert(pk_index_.end(), std::make_move_iterator(keys.begin()), std::make_move_iterator(keys.end()));
    }
  });
  if (pk.size() != pk_types.size()) return std::nullopt;
  for (size_t i = 0; i < pk.size(); ++i) {
    if (!ValueHasType(pk[i], pk_types[i])) return std::nullopt;
  }
  std::string key = EncodeSortKey(pk, pk_types);
  auto it = std::lower_bound(pk_index_.begin(), pk_index_.end(), key);
  if (it == pk_index_.end() || *it != key) return std::nullopt;
  return static_cast<size_t>(it - pk_index_.begin());
}

Tuple ColumnBaseline::ReadRow(size_t ordinal) const {
  auto it = std::upper_bound(blocks_.begin(), blocks_.end(), ordinal,
                             [](size_t o, const BaselineBlock& b) { return o < b.row_start; });
  size_t block = static_cast<size_t>(it - blocks_.begin()) - 1;
  size_t offset = ordinal - blocks_[block].row_start;
  Tuple row;
  row.reserve(segments_.size());
  for (size_t c = 0; c < segments_.size(); ++c) row.push_back(DecodeColumn(c, block).GetValue(offset));
  return row;
}

uint64_t ColumnBaseline::encoded_bytes() const {
  uint64_t total = 0;
  for (const auto& seg : segments_) {
    for (const auto& b : seg.blocks) total += b.payload_size();
  }
  return total;
}

}  // namespace mercury
