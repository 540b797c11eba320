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
#include <cstdint>

#include "mercury/common/byte_io.h"
#include "mercury/common/value.h"
#include "mercury/vectors/aggregate.h"
#include "mercury/vectors/column_batch.h"

namespace mercury {

// Pre-aggregate of a run of column values. min/max are NULL when every row is
// NULL; sum is NULL for utf8.
struct Sketch {
  DataType type = DataType::kInt64;
  Value min;
  Value max;
  Value sum;
  uint64_t null_count = 0;
  uint64_t row_count = 0;

  bool HasValues() const { return row_count > null_count; }
  bool operator==(const Sketch&) const = default;
};

// Serialized size inside a block directory entry: min, max, sum, null_count, row_count.
inline constexpr size_t kSketchBytes = 40;

Sketch EmptySketch(DataType type);
// Exact sketch over every row of `batch` (selection is ignored).
Sketch SketchOf(const ColumnBatch& batch);
// Throws kTypeMismatch when the sketches describe different types.
Sketch MergeSketch(const Sketch& a, const Sketch& b);

// Numeric fields are bit-cast to u64; utf8 min/max keep an 8-byte zero-padded
// prefix, so utf8 sketches read back from disk are lossy.
void SerializeSketch(const Sketch& sketch, ByteWriter* out);
Sketch DeserializeSketch(DataType type, ByteReader* in);

// The aggregate state a block contributes when answered from its sketch.
AggState SketchToAggState(const Sketch& sketch, AggFunc func);

}  // namespace mercury
