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

#include "mercury/skipindex/sketch.h"

#include <bit>
#include <cstring>

#include "mercury/common/error.h"

namespace mercury {

Sketch EmptySketch(DataType type) {
  Sketch s;
  s.type = type;
  if (type == DataType::kInt64) s.sum = int64_t{0};
  if (type == DataType::kFloat64) s.sum = 0.0;
  return s;
}

Sketch SketchOf(const ColumnBatch& batch) {
  Sketch s = EmptySketch(batch.type());
  s.row_count = batch.size();
  for (size_t i = 0; i < batch.size(); ++i) {
    if (batch.IsNull(i)) {
      ++s.null_count;
      continue;
    }
    Value v = batch.GetValue(i);
    if (batch.type() == DataType::kInt64) {
      s.sum = WrappingAdd(std::get<int64_t>(s.sum), std::get<int64_t>(v));
    } else if (batch.type() == DataType::kFloat64) {
      s.sum = std::get<double>(s.sum) + std::get<double>(v);
    }
    if (IsNull(s.min) || CompareValues(v, s.min) < 0) s.min = v;
    if (IsNull(s.max) || CompareValues(v, s.max) > 0) s.max = std::move(v);
  }
  return s;
}

Sketch MergeSketch(const Sketch& a, const Sketch& b) {
  if (a.type != b.type) throw Error(ErrorCode::kTypeMismatch, "merging sketches of different column types");
  Sketch s = a;
  s.row_count += b.row_count;
  s.null_count += b.null_count;
  if (a.type == DataType::kInt64) {
    s.sum = WrappingAdd(std::get<int64_t>(a.sum), std::get<int64_t>(b.sum));
  } else if (a.type == DataType::kFloat64) {
    s.sum = std::get<double>(a.sum) + std::get<double>(b.sum);
  }
  if (!IsNull(b.min) && (IsNull(s.min) || CompareValues(b.min, s.min) < 0)) s.min = b.min;
  if (!IsNull(b.max) && (IsNull(s.max) || CompareValues(b.max, s.max) > 0)) s.max = b.max;
  return s;
}

namespace {

uint64_t PackValue(const Value& v) {
  switch (v.index()) {
    case 1: return static_cast<uint64_t>(std::get<int64_t>(v));
    case 2: return std::bit_cast<uint64_t>(std::get<double>(v));
    case 3: {
      uint64_t w = 0;
      const auto& s = std::get<std::string>(v);
      std::memcpy(&w, s.data(), std::min<size_t>(8, s.size()));
      return w;
    }
    default: return 0;
  }
}

Value UnpackValue(DataType type, uint64_t w) {
  switch (type) {
    case DataType::kInt64: return static_cast<int64_t>(w);
    case DataType::kFloat64: return std::bit_cast<double>(w);
    case DataType::kUtf8: {
      char buf[8];
      std::memcpy(buf, &w, 8);
      size_t len = 8;
      while (len > 0 && buf[len - 1] == '\0') --len;
      return std::string(buf, len);
    }
  }
  return std::monostate{};
}

}  // namespace

void SerializeSketch(const Sketch& sketch, ByteWriter* out) {
  out->PutU64(PackValue(sketch.min));
  out->PutU64(PackValue(sketch.max));
  out->PutU64(PackValue(sketch.sum));
  out->PutU64(sketch.null_count);
  out->PutU64(sketch.row_count);
}

Sketch DeserializeSketch(DataType type, ByteReader* in) {
  Sketch s = EmptySketch(type);
  uint64_t min = in->GetU64();
  uint64_t max = in->GetU64();
  uint64_t sum = in->GetU64();
  s.null_count = in->GetU64();
  s.row_count = in->GetU64();
  if (s.HasValues()) {
    s.min = UnpackValue(type, min);
    s.max = UnpackValue(type, max);
  }
  if (type != DataType::kUtf8) s.sum = UnpackValue(type, sum);
  return s;
}

AggState SketchToAggState(const Sketch& sketch, AggFunc func) {
  AggState st;
  st.count = static_cast<int64_t>(func == AggFunc::kCountStar ? sketch.row_count
                                                               : sketch.row_count - sketch.null_count);
  if (auto* i = std::get_if<int64_t>(&sketch.sum)) st.int_sum = *i;
  if (auto* d = std::get_if<double>(&sketch.sum)) st.float_sum = *d;
  st.min = sketch.min;
  st.max = sketch.max;
  return st;
}

}  // namespace mercury
