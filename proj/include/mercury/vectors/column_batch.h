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
#include <string>
#include <string_view>
#include <vector>

#include "mercury/common/bitmap.h"
#include "mercury/common/value.h"

namespace mercury {

// Physical layouts a column vector can take.
//
//  kFixedLen      one contiguous buffer, row i at i * elem_len. Fixed-width types only.
//  kVarDiscrete   per-row (ptr, len) pairs; the bytes live wherever the producer
//                 put them (an encoded block, another batch, ...).
//  kVarContinuous one contiguous buffer plus row_count + 1 offsets.
enum class VectorFormat : uint8_t { kFixedLen, kVarDiscrete, kVarContinuous };

std::string_view VectorFormatName(VectorFormat format);

// Per-batch attribute information consulted by kernels to pick a fast path.
struct BatchFlags {
  bool has_null = false;
  bool all_active = true;
  // Present iff !all_active; bit i set means row i survived every filter.
  std::optional<Bitmap> selection;
};

class ColumnBatch {
 public:
  ColumnBatch() = default;

  static ColumnBatch FromInt64(std::span<const int64_t> values, const Bitmap* nulls = nullptr);
  static ColumnBatch FromFloat64(std::span<const double> values, const Bitmap* nulls = nullptr);
  static ColumnBatch FromStrings(std::span<const std::string> values, const Bitmap* nulls = nullptr,
                                 VectorFormat format = VectorFormat::kVarContinuous);
  // NULL cells are monostate; non-null cells must match `type`.
  static ColumnBatch FromValues(DataType type, std::span<const Value> values);

  static ColumnBatch MakeFixedLen(DataType type, std::shared_ptr<const std::vector<uint8_t>> data, size_t row_count,
                                  Bitmap nulls);
  static ColumnBatch MakeVarContinuous(DataType type, std::shared_ptr<const std::vector<uint8_t>> data,
                                       std::vector<uint32_t> offsets, Bitmap nulls);
  // `owner` keeps the memory behind `ptrs` alive.
  static ColumnBatch MakeVarDiscrete(DataType type, std::vector<const uint8_t*> ptrs, std::vector<uint32_t> lens,
                                     Bitmap nulls, std::shared_ptr<const void> owner);

  DataType type() const { return type_; }
  VectorFormat format() const { return format_; }
  size_t size() const { return row_count_; }
  uint32_t elem_len() const { return elem_len_; }

  bool IsNull(size_t i) const { return flags_.has_null && nulls_.Test(i); }
  bool IsActive(size_t i) const { return flags_.all_active || flags_.selection->Test(i); }

  // Raw bytes of row i in any format.
  std::string_view GetBytes(size_t i) const;
  int64_t GetInt64(size_t i) const;
  double GetFloat64(size_t i) const;
  std::string_view GetString(size_t i) const { return GetBytes(i); }
  Value GetValue(size_t i) const;
  std::vector<Value> ToValues() const;

  const Bitmap& nulls() const { return nulls_; }
  const BatchFlags& flags() const { return flags_; }
  BatchFlags& mutable_flags() { return flags_; }

  // Contiguous buffer for kFixedLen / kVarContinuous.
  const uint8_t* data() const { return data_ ? data_->data() : nullptr; }
  const std::vector<uint32_t>& offsets() const { return offsets_; }
  const std::vector<const uint8_t*>& ptrs() const { return ptrs_; }
  const std::vector<uint32_t>& lens() const { return lens_; }

  // Row-wise gather of the active rows into a new all-active batch.
  ColumnBatch Compact() const;

 private:
  friend ColumnBatch Convert(const ColumnBatch& batch, VectorFormat to);

  void SetNulls(Bitmap nulls);

  DataType type_ = DataType::kInt64;
  VectorFormat format_ = VectorFormat::kFixedLen;
  size_t row_count_ = 0;
  uint32_t elem_len_ = 0;
  Bitmap nulls_;
  std::shared_ptr<const std::vector<uint8_t>> data_;
  std::vector<uint32_t> offsets_;
  std::vector<const uint8_t*> ptrs_;
  std::vector<uint32_t> lens_;
  std::vector<std::shared_ptr<const void>> owners_;
  BatchFlags flags_;
};

// Re-lays `batch` out in format `to`, preserving values, nulls and flags.
// Throws kIllegalFormat for kFixedLen on utf8.
ColumnBatch Convert(const ColumnBatch& batch, VectorFormat to);

// Logical equality: same type, size, null positions and non-null values.
bool SameValues(const ColumnBatch& a, const ColumnBatch& b);

}  // namespace mercury
