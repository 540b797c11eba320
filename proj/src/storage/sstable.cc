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

#include "mercury/storage/sstable.h"

#include <algorithm>
#include <cstring>

#include "mercury/common/error.h"

namespace mercury {

std::string_view SSTableLevelName(SSTableLevel level) {
  return level == SSTableLevel::kMinor ? "minor" : "major";
}

void WriteSSTableHeader(SSTableFormat format, uint16_t column_count, ByteWriter* out) {
  out->PutBytes(std::span<const uint8_t>(kSSTableMagic, 4));
  out->PutU16(kSSTableFormatVersion);
  out->PutU8(static_cast<uint8_t>(format));
  out->PutU16(column_count);
}

std::pair<SSTableFormat, uint16_t> ReadSSTableHeader(ByteReader* in) {
  auto magic = in->GetBytes(4);
  if (std::memcmp(magic.data(), kSSTableMagic, 4) != 0) throw Error(ErrorCode::kCorruption, "bad sstable magic");
  uint16_t version = in->GetU16();
  if (version != kSSTableFormatVersion) {
    throw Error(ErrorCode::kCorruption, "unsupported sstable format_version " + std::to_string(version));
  }
  uint8_t format = in->GetU8();
  if (format > 1) throw Error(ErrorCode::kCorruption, "bad sstable format byte");
  return {static_cast<SSTableFormat>(format), in->GetU16()};
}

void WriteSSTableFooter(uint64_t index_offset, ByteWriter* out) {
  out->PutU64(index_offset);
  out->PutU32(Crc32(out->data()));
}

uint64_t ReadSSTableFooter(std::span<const uint8_t> file) {
  if (file.size() < kSSTableHeaderBytes + kSSTableFooterBytes) throw Error(ErrorCode::kCorruption, "sstable too short");
  ByteReader footer(file.subspan(file.size() - kSSTableFooterBytes));
  uint64_t index_offset = footer.GetU64();
  uint32_t crc = footer.GetU32();
  if (Crc32(file.first(file.size() - 4)) != crc) throw Error(ErrorCode::kCorruption, "sstable checksum mismatch");
  if (index_offset < kSSTableHeaderBytes || index_offset > file.size() - kSSTableFooterBytes) {
    throw Error(ErrorCode::kCorruption, "sstable index offset out of range");
  }
  return index_offset;
}

void PutCell(const Value& v, DataType type, ByteWriter* out) {
  if (IsNull(v)) {
    out->PutU8(0);
    return;
  }
  out->PutU8(1);
  switch (type) {
    case DataType::kInt64: out->PutI64(std::get<int64_t>(v)); break;
    case DataType::kFloat64: out->PutF64(std::get<double>(v)); break;
    case DataType::kUtf8: out->PutString(std::get<std::string>(v)); break;
  }
}

Value GetCell(DataType type, ByteReader* in) {
  uint8_t present = in->GetU8();
  if (present == 0) return std::monostate{};
  if (present != 1) throw Error(ErrorCode::kCorruption, "bad cell tag");
  switch (type) {
    case DataType::kInt64: return in->GetI64();
    case DataType::kFloat64: return in->GetF64();
    case DataType::kUtf8: return std::string(in->GetStringView());
  }
  return std::monostate{};
}

std::shared_ptr<const RowSSTable> RowSSTable::Build(uint64_t id, SSTableLevel level, std::vector<Row> rows) {
  auto t = std::make_shared<RowSSTable>();
  t->meta_.id = id;
  t->meta_.level = level;
  t->meta_.format = SSTableFormat::kRow;
  for (size_t i = 1; i < rows.size(); ++i) {
    int c = CompareTuples(rows[i - 1].pk, rows[i].pk);
    if (c > 0 || (c == 0 && rows[i - 1].version >= rows[i].version)) {
      throw Error(ErrorCode::kInvalidArgument, "row sstable input not in (pk, version) order");
    }
  }
  if (!rows.empty()) {
    t->meta_.min_pk = rows.front().pk;
    t->meta_.max_pk = rows.back().pk;
    t->meta_.min_version = rows.front().version;
    t->meta_.max_version = rows.front().version;
    for (const auto& r : rows) {
      t->meta_.min_version = std::min(t->meta_.min_version, r.version);
      t->meta_.max_version = std::max(t->meta_.max_version, r.version);
    }
  }
  t->rows_ = std::move(rows);
  return t;
}

namespace {

// [first, last) of the versions of `pk`.
std::pair<size_t, size_t> PkSpan(const std::vector<Row>& rows, const Tuple& pk) {
  auto lo = std::lower_bound(rows.begin(), rows.end(), pk,
                             [](const Row& r, const Tuple& k) { return CompareTuples(r.pk, k) < 0; });
  auto hi = lo;
  while (hi != rows.end() && CompareTuples(hi->pk, pk) == 0) ++hi;
  return {static_cast<size_t>(lo - rows.begin()), static_cast<size_t>(hi - rows.begin())};
}

}  // namespace

std::optional<Row> RowSSTable::Get(const Tuple& pk, uint64_t read_version) const {
  auto [first, last] = PkSpan(rows_, pk);
  for (size_t i = last; i-- > first;) {
    if (rows_[i].version <= read_version) return rows_[i];
  }
  return std::nullopt;
}

void RowSSTable::CollectVisible(uint64_t read_version, const PkRange& range, std::vector<Row>* out) const {
  size_t i = 0;
  if (range.lo) {
    i = static_cast<size_t>(std::lower_bound(rows_.begin(), rows_.end(), *range.lo,
                                             [](const Row& r, const Tuple& k) {
                                               return CompareTuples(r.pk, k) < 0;
                                             }) -
                            rows_.begin());
  }
  while (i < rows_.size()) {
    const Tuple& pk = rows_[i].pk;
    if (range.hi && CompareTuples(pk, *range.hi) > 0) break;
    size_t j = i;
    const Row* best = nullptr;
    while (j < rows_.size() && CompareTuples(rows_[j].pk, pk) == 0) {
      if (rows_[j].version <= read_version) best = &rows_[j];
      ++j;
    }
    if (best) out->push_back(*best);
    i = j;
  }
}

std::vector<uint8_t> RowSSTable::Serialize(const TableSchema& schema) const {
  ByteWriter w;
  WriteSSTableHeader(SSTableFormat::kRow, static_cast<uint16_t>(schema.columns.size()), &w);
  for (const auto& row : rows_) {
    size_t len_pos = w.size();
    w.PutU32(0);
    w.PutU64(row.version);
    w.PutU8(row.tombstone ? 1 : 0);
    for (size_t c = 0; c < schema.columns.size(); ++c) PutCell(row.values[c], schema.columns[c].type, &w);
    w.PatchU32(len_pos, static_cast<uint32_t>(w.size() - len_pos - 4));
  }
  uint64_t index_offset = w.size();
  w.PutU64(rows_.size());
  w.PutU64(meta_.min_version);
  w.PutU64(meta_.max_version);
  WriteSSTableFooter(index_offset, &w);
  return w.Release();
}

std::shared_ptr<const RowSSTable> RowSSTable::Parse(uint64_t id, SSTableLevel level, std::span<const uint8_t> file,
                                                    const TableSchema& schema) {
  uint64_t index_offset = ReadSSTableFooter(file);
  ByteReader in(file.first(index_offset));
  auto [format, column_count] = ReadSSTableHeader(&in);
  if (format != SSTableFormat::kRow) throw Error(ErrorCode::kCorruption, "expected a row-format sstable");
  if (column_count != schema.columns.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "row sstable has " + std::to_string(column_count) + " columns, schema has " +
                                                std::to_string(schema.columns.size()));
  }
  ByteReader index(file.subspan(index_offset, file.size() - kSSTableFooterBytes - index_offset));
  uint64_t count = index.GetU64();
  auto pk_idx = schema.PkIndices();
  std::vector<Row> rows;
  rows.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    uint32_t len = in.GetU32();
    ByteReader rec(in.GetBytes(len));
    Row row;
    row.version = rec.GetU64();
    row.tombstone = rec.GetU8() != 0;
    row.values.reserve(column_count);
    for (const auto& col : schema.columns) row.values.push_back(GetCell(col.type, &rec));
    for (size_t k : pk_idx) row.pk.push_back(row.values[k]);
    rows.push_back(std::move(row));
  }
  if (in.remaining() != 0) throw Error(ErrorCode::kCorruption, "trailing bytes after row records");
  return Build(id, level, std::move(rows));
}

}  // namespace mercury
