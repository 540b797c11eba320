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

#include "mercury/vectors/aggregate.h"

#include <bit>
#include <cstring>

#include "mercury/common/error.h"

namespace mercury {

void AggState::Add(const Value& v) {
  ++count;
  if (auto* i = std::get_if<int64_t>(&v)) {
    int_sum = WrappingAdd(int_sum, *i);
  } else if (auto* d = std::get_if<double>(&v)) {
    float_sum += *d;
  }
  if (IsNull(min) || CompareValues(v, min) < 0) min = v;
  if (IsNull(max) || CompareValues(v, max) > 0) max = v;
}

void AggState::Merge(const AggState& other) {
  count += other.count;
  int_sum = WrappingAdd(int_sum, other.int_sum);
  float_sum += other.float_sum;
  if (!IsNull(other.min) && (IsNull(min) || CompareValues(other.min, min) < 0)) min = other.min;
  if (!IsNull(other.max) && (IsNull(max) || CompareValues(other.max, max) > 0)) max = other.max;
}

Value FinalizeAgg(const BoundAgg& agg, const AggState& state) {
  switch (agg.func) {
    case AggFunc::kCountStar:
    case AggFunc::kCountCol: return state.count;
    case AggFunc::kSum:
      if (state.count == 0) return std::monostate{};
      if (agg.input_type == DataType::kInt64) return state.int_sum;
      return state.float_sum;
    case AggFunc::kAvg:
      if (state.count == 0) return std::monostate{};
      if (agg.input_type == DataType::kInt64) {
        return static_cast<double>(state.int_sum) / static_cast<double>(state.count);
      }
      return state.float_sum / static_cast<double>(state.count);
    case AggFunc::kMin: return state.min;
    case AggFunc::kMax: return state.max;
  }
  return std::monostate{};
}

namespace {

void CheckAggType(const ColumnBatch& batch, AggFunc func) {
  if ((func == AggFunc::kSum || func == AggFunc::kAvg) && !IsNumeric(batch.type())) {
    throw Error(ErrorCode::kTypeMismatch, "sum/avg over utf8");
  }
}

// Dense loop over a fixed-length batch with no nulls and no filtered rows.
template <typename T>
void FoldDense(const ColumnBatch& batch, AggFunc func, AggState* state) {
  size_t n = batch.size();
  if (n == 0) return;
  state->count += static_cast<int64_t>(n);
  if (func == AggFunc::kCountCol || func == AggFunc::kCountStar) return;
  const uint8_t* base = batch.data();
  T lo, hi;
  std::memcpy(&lo, base, sizeof(T));
  hi = lo;
  if constexpr (std::is_same_v<T, int64_t>) {
    uint64_t sum = 0;
    for (size_t i = 0; i < n; ++i) {
      T v;
      std::memcpy(&v, base + i * sizeof(T), sizeof(T));
      sum += static_cast<uint64_t>(v);
      lo = v < lo ? v : lo;
      hi = v > hi ? v : hi;
    }
    state->int_sum = WrappingAdd(state->int_sum, static_cast<int64_t>(sum));
  } else {
    // Same left-to-right order as the general path, so results are bit-identical.
    double sum = state->float_sum;
    for (size_t i = 0; i < n; ++i) {
      T v;
      std::memcpy(&v, base + i * sizeof(T), sizeof(T));
      sum += v;
      lo = v < lo ? v : lo;
      hi = v > hi ? v : hi;
    }
    state->float_sum = sum;
  }
  if (IsNull(state->min) || CompareValues(Value(lo), state->min) < 0) state->min = lo;
  if (IsNull(state->max) || CompareValues(Value(hi), state->max) > 0) state->max = hi;
}

// Fixed-length batch with a selection and/or nulls: walks the set bits of
// active & ~null a word at a time.
template <typename T>
void FoldMasked(const ColumnBatch& batch, AggFunc func, AggState* state) {
  const auto& flags = batch.flags();
  size_t n = batch.size();
  size_t words = (n + 63) / 64;
  const uint8_t* base = batch.data();
  int64_t count = 0;
  uint64_t isum = 0;
  double fsum = state->float_sum;
  T lo{}, hi{};
  bool any = false;
  for (size_t w = 0; w < words; ++w) {
    uint64_t bits = flags.all_active ? ~uint64_t{0} : flags.selection->words()[w];
    if (flags.has_null) bits &= ~batch.nulls().words()[w];
    if (w + 1 == words && n % 64) bits &= (uint64_t{1} << (n % 64)) - 1;
    count += std::popcount(bits);
    if (func == AggFunc::kCountCol) continue;
    while (bits) {
      size_t i = w * 64 + static_cast<size_t>(std::countr_zero(bits));
      bits &= bits - 1;
      T v;
      std::memcpy(&v, base + i * sizeof(T), sizeof(T));
      if constexpr (std::is_same_v<T, int64_t>) {
        isum += static_cast<uint64_t>(v);
      } else {
        fsum += v;
      }
      if (!any) {
        lo = hi = v;
        any = true;
      }
      lo = v < lo ? v : lo;
      hi = v > hi ? v : hi;
    }
  }
  state->count += count;
  if (func == AggFunc::kCountCol || !any) return;
  if constexpr (std::is_same_v<T, int64_t>) {
    state->int_sum = WrappingAdd(state->int_sum, static_cast<int64_t>(isum));
  } else {
    state->float_sum = fsum;
  }
  if (IsNull(state->min) || CompareValues(Value(lo), state->min) < 0) state->min = lo;
  if (IsNull(state->max) || CompareValues(Value(hi), state->max) > 0) state->max = hi;
}

}  // namespace

void AggregateGeneral(const ColumnBatch& batch, AggFunc func, AggState* state) {
  CheckAggType(batch, func);
  for (size_t i = 0; i < batch.size(); ++i) {
    if (!batch.IsActive(i)) continue;
    if (func == AggFunc::kCountStar) {
      ++state->count;
      continue;
    }
    if (batch.IsNull(i)) continue;
    if (func == AggFunc::kCountCol) {
      ++state->count;
      continue;
    }
    state->Add(batch.GetValue(i));
  }
}

void Aggregate(const ColumnBatch& batch, AggFunc func, AggState* state) {
  const auto& flags = batch.flags();
  if (func == AggFunc::kCountStar) {
    state->count += static_cast<int64_t>(flags.all_active ? batch.size() : flags.selection->CountSet());
    return;
  }
  if (batch.format() == VectorFormat::kFixedLen && (flags.has_null || !flags.all_active)) {
    CheckAggType(batch, func);
    if (batch.type() == DataType::kInt64) return FoldMasked<int64_t>(batch, func, state);
    return FoldMasked<double>(batch, func, state);
  }
  if (!flags.has_null && flags.all_active) {
    CheckAggType(batch, func);
    if (func == AggFunc::kCountCol) {
      state->count += static_cast<int64_t>(batch.size());
      return;
    }
    if (batch.format() == VectorFormat::kFixedLen) {
      if (batch.type() == DataType::kInt64) return FoldDense<int64_t>(batch, func, state);
      return FoldDense<double>(batch, func, state);
    }
  }
  AggregateGeneral(batch, func, state);
}

}  // namespace mercury
