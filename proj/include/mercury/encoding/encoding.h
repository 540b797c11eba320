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
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mercury/common/bitmap.h"
#include "mercury/common/predicate.h"
#include "mercury/skipindex/sketch.h"
#include "mercury/vectors/column_batch.h"

namespace mercury {

// Stored verbatim in the SSTable block directory.
enum class EncodingId : uint8_t {
  kPlain = 0,
  kDelta = 1,
  kDict = 2,
  kPrefix = 3,
  kIntercolEq = 4,
  kIntercolSubstr = 5,
};

inline constexpr int kEncodingCount = 6;
std::string_view EncodingName(EncodingId id);

// One column's slice of one block.
//
// Payload layouts (little-endian):
//   plain            int64/float64: 8 bytes per row; utf8: u32 len + bytes per row
//   delta            i64 min, u8 bit_width, packed (value - min) per row
//   dict             u32 ndv, u8 code_width, sorted dictionary (plain layout), packed codes
//   prefix           u8 runs, per run {u32 rows, u32 len + prefix}, then u32 len + suffix per row
//   intercol_eq      u16 source column
//   intercol_substr  u16 source column, then u32 len + suffix per row
// NULL rows hold zero / empty entries; null positions live in null_bitmap.
struct EncodedBlock {
  EncodingId encoding_id = EncodingId::kPlain;
  DataType type = DataType::kInt64;
  uint32_t row_count = 0;
  Bitmap null_bitmap;
  // Shared so decoded kVarDiscrete batches can point straight into it.
  std::shared_ptr<const std::vector<uint8_t>> payload;
  Sketch stats;

  size_t payload_size() const { return payload ? payload->size() : 0; }
  std::span<const uint8_t> payload_bytes() const {
    return payload ? std::span<const uint8_t>(*payload) : std::span<const uint8_t>();
  }
};

struct EncodingOptions {
  uint32_t dict_ndv_threshold = 256;
  int max_prefix_runs = 4;
  // Inter-column sources are limited to columns [intercol_first_source, column).
  size_t intercol_first_source = 0;
};

EncodedBlock EncodePlain(const ColumnBatch& values);
// Throws kTypeMismatch for non-int64 input, kOverflow when max - min does not
// fit in 63 bits.
EncodedBlock EncodeDelta(const ColumnBatch& values);
// Throws kTypeMismatch for non-utf8 input. Uses up to `max_runs` contiguous
// runs, each with its own prefix, when splitting strictly shrinks the payload.
EncodedBlock EncodePrefix(const ColumnBatch& values, int max_runs = 4);
// Throws kNdvTooHigh when the block has more than `ndv_threshold` distinct values.
EncodedBlock EncodeDict(const ColumnBatch& values, uint32_t ndv_threshold = 256);
// Encodes block_cols[target] relative to block_cols[source]: intercol_eq when
// every row equals the source, otherwise intercol_substr when the source is a
// row-wise prefix. Throws kNotApplicable when neither holds.
EncodedBlock EncodeIntercol(std::span<const ColumnBatch> block_cols, size_t target, size_t source);

// Smallest payload among applicable candidates, ties broken by enum order.
// Inter-column candidates only consider earlier columns, first applicable wins.
EncodingId ChooseEncoding(std::span<const ColumnBatch> block_cols, size_t column, const EncodingOptions& options = {});
// ChooseEncoding + encode.
EncodedBlock EncodeBest(std::span<const ColumnBatch> block_cols, size_t column, const EncodingOptions& options = {});

// Supplies an already-decoded sibling column of the same block.
using SourceResolver = std::function<ColumnBatch(uint16_t column)>;

// Source column an inter-column block depends on.
std::optional<uint16_t> IntercolSource(const EncodedBlock& block);

ColumnBatch Decode(const EncodedBlock& block, const SourceResolver& sources = {});

// Dictionary-coded view of a kDict block without materializing row values.
struct DictCodes {
  ColumnBatch dictionary;
  std::vector<uint32_t> codes;
};
DictCodes DecodeDictCodes(const EncodedBlock& block);

// Selection bitmap of `column <op> literal` computed on the encoded form:
// dict compares codes against the literal's dictionary position, delta compares
// packed deltas against the rebased literal, other encodings decode first.
// NULL rows never match. Throws kTypeMismatch for a literal of the wrong type.
Bitmap EvalPredicateEncoded(const EncodedBlock& block, CompareOp op, const Value& literal,
                            const SourceResolver& sources = {});

}  // namespace mercury
