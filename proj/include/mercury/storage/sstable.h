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
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "mercury/catalog/schema.h"
#include "mercury/common/byte_io.h"
#include "mercury/storage/row.h"

namespace mercury {

inline constexpr uint8_t kSSTableMagic[4] = {'M', 'R', 'C', 'S'};
inline constexpr uint16_t kSSTableFormatVersion = 1;
inline constexpr size_t kSSTableHeaderBytes = 9;
inline constexpr size_t kSSTableFooterBytes = 12;

enum class SSTableLevel : uint8_t { kMinor, kMajor };
enum class SSTableFormat : uint8_t { kRow = 0, kColumn = 1 };
std::string_view SSTableLevelName(SSTableLevel level);

struct SegmentDesc {
  uint16_t column = 0;
  DataType type = DataType::kInt64;
  uint32_t block_count = 0;
  uint64_t encoded_bytes = 0;
};

struct SSTableMeta {
  uint64_t id = 0;
  SSTableLevel level = SSTableLevel::kMinor;
  SSTableFormat format = SSTableFormat::kRow;
  uint64_t min_version = 0;
  uint64_t max_version = 0;
  Tuple min_pk;
  Tuple max_pk;
  std::vector<SegmentDesc> column_segments;
};

void WriteSSTableHeader(SSTableFormat format, uint16_t column_count, ByteWriter* out);
// Validates magic and version; returns the format and column count.
std::pair<SSTableFormat, uint16_t> ReadSSTableHeader(ByteReader* in);
// Appends {index_offset u64, crc32 u32}; the crc covers every preceding byte.
void WriteSSTableFooter(uint64_t index_offset, ByteWriter* out);
// Verifies the crc and returns index_offset.
uint64_t ReadSSTableFooter(std::span<const uint8_t> file);

// Immutable run of row records ordered by (pk, version). Minor SSTables keep
// every version; the row-format baseline keeps one live image per pk.
class RowSSTable {
 public:
  static std::shared_ptr<const RowSSTable> Build(uint64_t id, SSTableLevel level, std::vector<Row> rows);

  const SSTableMeta& meta() const { return meta_; }
  const std::vector<Row>& rows() const { return rows_; }
  size_t size() const { return rows_.size(); }

  std::optional<Row> Get(const Tuple& pk, uint64_t read_version) const;
  // Appends, in pk order, the newest version ≤ read_version per pk in range.
  void CollectVisible(uint64_t read_version, const PkRange& range, std::vector<Row>* out) const;

  // Layout after the header: length-prefixed records, then the index
  // {record_count u64, min_version u64, max_version u64}, then the footer.
  // A record is {version u64, tombstone u8, per column: present u8 + value}.
  std::vector<uint8_t> Serialize(const TableSchema& schema) const;
  static std::shared_ptr<const RowSSTable> Parse(uint64_t id, SSTableLevel level, std::span<const uint8_t> file,
                                                 const TableSchema& schema);

 private:
  SSTableMeta meta_;
  std::vector<Row> rows_;
};

void PutCell(const Value& v, DataType type, ByteWriter* out);
Value GetCell(DataType type, ByteReader* in);

}  // namespace mercury
