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

#include "mercury/vectors/column_batch.h"

#include <cstring>

#include "mercury/common/error.h"

namespace mercury {

std::string_view VectorFormatName(VectorFormat format) {
  switch (format) {
    case VectorFormat::kFixedLen: return "fixed_len";
    case VectorFormat::kVarDiscrete: return "var_discrete";
    case VectorFormat::kVarContinuous: return "var_continuous";
  }
  return "?";
}

void ColumnBatch::SetNulls(Bitmap nulls) {
  if (nulls.size() != row_count_) nulls = Bitmap(row_count_);
  flags_.has_null = !nulls.NoneSet();
  nulls_ = std::move(nulls);
}

namespace {

template <typename T>
ColumnBatch FromFixed(DataType type, std::span<const T> values, const Bitmap* nulls) {
  auto buf = std::make_shared<std::vector<uint8_t>>(values.size() * sizeof(T));
  if (!values.empty()) std::memcpy(buf->data(), values.data(), buf->size());
  if (nulls) {
    for (size_t i = 0; i < values.size(); ++i) {
      if (nulls->Test(i)) std::memset(buf->data() + i * sizeof(T), 0, sizeof(T));
    }
  }
  return ColumnBatch::MakeFixedLen(type, std::move(buf), values.size(), nulls ? *nulls : Bitmap(values.size()));
}

}  // namespace

ColumnBatch ColumnBatch::FromInt64(std::span<const int64_t> values, const Bitmap* nulls) {
  return FromFixed(DataType::kInt64, values, nulls);
}

ColumnBatch ColumnBatch::FromFloat64(std::span<const double> values, const Bitmap* nulls) {
  return FromFixed(DataType::kFloat64, values, nulls);
}

ColumnBatch ColumnBatch::FromStrings(std::span<const std::string> values, const Bitmap* nulls, VectorFormat format) {
  auto buf = std::make_shared<std::vector<uint8_t>>();
  std::vector<uint32_t> offsets;
  offsets.reserve(values.size() + 1);
  offsets.push_back(0);
  for (size_t i = 0; i < values.size(); ++i) {
    if (!nulls || !nulls->Test(i)) buf->insert(buf->end(), values[i].begin(), values[i].end());
    offsets.push_back(static_cast<uint32_t>(buf->size()));
  }
  auto batch = MakeVarContinuous(DataType::kUtf8, std::move(buf), std::move(offsets),
                                 nulls ? *nulls : Bitmap(values.size()));
  return format == VectorFormat::kVarContinuous ? batch : Convert(batch, format);
}

ColumnBatch ColumnBatch::FromValues(DataType type, std::span<const Value> values) {
  Bitmap nulls(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    if (mercury::IsNull(values[i])) {
      nulls.Set(i);
    } else if (!ValueHasType(values[i], type)) {
      throw Error(ErrorCode::kTypeMismatch,
                  "value " + ValueToString(values[i]) + " is not " + std::string(DataTypeName(type)));
    }
  }
  switch (type) {
    case DataType::kInt64: {
      std::vector<int64_t> v(values.size(), 0);
      for (size_t i = 0; i < values.size(); ++i) {
        if (!nulls.Test(i)) v[i] = std::get<int64_t>(values[i]);
      }
      return FromInt64(v, &nulls);
    }
    case DataType::kFloat64: {
      std::vector<double> v(values.size(), 0);
      for (size_t i = 0; i < values.size(); ++i) {
        if (!nulls.Test(i)) v[i] = std::get<double>(values[i]);
      }
      return FromFloat64(v, &nulls);
    }
    case DataType::kUtf8: {
      std::vector<std::string> v(values.size());
      for (size_t i = 0; i < values.size(); ++i) {
        if (!nulls.Test(i)) v[i] = std::get<std::string>(values[i]);
      }
      return FromStrings(v, &nulls);
    }
  }
  return {};
}

ColumnBatch ColumnBatch::MakeFixedLen(DataType type, std::shared_ptr<const std::vector<uint8_t>> data,
                                      size_t row_count, Bitmap nulls) {
  if (!IsFixedWidth(type)) throw Error(ErrorCode::kIllegalFormat, "utf8 has no fixed-length layout");
  ColumnBatch b;
  b.type_ = type;
  b.format_ = VectorFormat::kFixedLen;
  b.row_count_ = row_count;
  b.elem_len_ = 8;
  if (data->size() != row_count * 8) throw Error(ErrorCode::kLengthMismatch, "fixed-length buffer size");
  b.data_ = std::move(data);
  b.SetNulls(std::move(nulls));
  return b;
}

ColumnBatch ColumnBatch::MakeVarContinuous(DataType type, std::shared_ptr<const std::vector<uint8_t>> data,
                                           std::vector<uint32_t> offsets, Bitmap nulls) {
  if (offsets.empty() || offsets.front() != 0 || offsets.back() != data->size()) {
    throw Error(ErrorCode::kLengthMismatch, "offsets do not cover buffer");
  }
  ColumnBatch b;
  b.type_ = type;
  b.format_ = VectorFormat::kVarContinuous;
  b.row_count_ = offsets.size() - 1;
  b.data_ = std::move(data);
  b.offsets_ = std::move(offsets);
  b.SetNulls(std::move(nulls));
  return b;
}

ColumnBatch ColumnBatch::MakeVarDiscrete(DataType type, std::vector<const uint8_t*> ptrs, std::vector<uint32_t> lens,
                                         Bitmap nulls, std::shared_ptr<const void> owner) {
  if (ptrs.size() != lens.size()) throw Error(ErrorCode::kLengthMismatch, "ptrs/lens size");
  ColumnBatch b;
  b.type_ = type;
  b.format_ = VectorFormat::kVarDiscrete;
  b.row_count_ = ptrs.size();
  b.ptrs_ = std::move(ptrs);
  b.lens_ = std::move(lens);
  if (owner) b.owners_.push_back(std::move(owner));
  b.SetNulls(std::move(nulls));
  return b;
}

std::string_view ColumnBatch::GetBytes(size_t i) const {
  switch (format_) {
    case VectorFormat::kFixedLen:
      return {reinterpret_cast<const char*>(data_->data() + i * elem_len_), elem_len_};
    case VectorFormat::kVarContinuous:
      return {reinterpret_cast<const char*>(data_->data() + offsets_[i]), offsets_[i + 1] - offsets_[i]};
    case VectorFormat::kVarDiscrete:
      return {reinterpret_cast<const char*>(ptrs_[i]), lens_[i]};
  }
  return {};
}

int64_t ColumnBatch::GetInt64(size_t i) const {
  int64_t v = 0;
  auto bytes = GetBytes(i);
  if (bytes.size() == sizeof v) std::memcpy(&v, bytes.data(), sizeof v);
  return v;
}

double ColumnBatch::GetFloat64(size_t i) const {
  double v = 0;
  auto bytes = GetBytes(i);
  if (bytes.size() == sizeof v) std::memcpy(&v, bytes.data(), sizeof v);
  return v;
}

Value ColumnBatch::GetValue(size_t i) const {
  if (IsNull(i)) return std::monostate{};
  switch (type_) {
    case DataType::kInt64: return GetInt64(i);
    case DataType::kFloat64: return GetFloat64(i);
    case DataType::kUtf8: return std::string(GetBytes(i));
  }
  return std::monostate{};
}

std::vector<Value> ColumnBatch::ToValues() const {
  std::vector<Value> out;
  out.reserve(row_count_);
  for (size_t i = 0; i < row_count_; ++i) out.push_back(GetValue(i));
  return out;
}

ColumnBatch ColumnBatch::Compact() const {
  std::vector<Value> values;
  for (size_t i = 0; i < row_count_; ++i) {
    if (IsActive(i)) values.push_back(GetValue(i));
  }
  ColumnBatch out = FromValues(type_, values);
  return format_ == out.format_ ? out : Convert(out, format_);
}

ColumnBatch Convert(const ColumnBatch& batch, VectorFormat to) {
  if (to == VectorFormat::kFixedLen && !IsFixedWidth(batch.type())) {
    throw Error(ErrorCode::kIllegalFormat, "utf8 cannot be laid out as fixed-length");
  }
  if (batch.format() == to) return batch;
  size_t n = batch.size();
  ColumnBatch out;
  switch (to) {
    case VectorFormat::kFixedLen: {
      auto buf = std::make_shared<std::vector<uint8_t>>(n * 8, 0);
      for (size_t i = 0; i < n; ++i) {
        auto bytes = batch.GetBytes(i);
        if (!batch.IsNull(i)) std::memcpy(buf->data() + i * 8, bytes.data(), std::min<size_t>(8, bytes.size()));
      }
      out = ColumnBatch::MakeFixedLen(batch.type(), std::move(buf), n, batch.nulls());
      break;
    }
    case VectorFormat::kVarDiscrete: {
      std::vector<const uint8_t*> ptrs(n);
      std::vector<uint32_t> lens(n);
      for (size_t i = 0; i < n; ++i) {
        auto bytes = batch.GetBytes(i);
        ptrs[i] = reinterpret_cast<const uint8_t*>(bytes.data());
        lens[i] = static_cast<uint32_t>(bytes.size());
      }
      out = ColumnBatch::MakeVarDiscrete(batch.type(), std::move(ptrs), std::move(lens), batch.nulls(), nullptr);
      // Shallow: keep every buffer the source depended on.
      out.owners_ = batch.owners_;
      if (batch.data_) out.owners_.push_back(batch.data_);
      break;
    }
    case VectorFormat::kVarContinuous: {
      auto buf = std::make_shared<std::vector<uint8_t>>();
      std::vector<uint32_t> offsets{0};
      offsets.reserve(n + 1);
      for (size_t i = 0; i < n; ++i) {
        auto bytes = batch.GetBytes(i);
        buf->insert(buf->end(), bytes.begin(), bytes.end());
        offsets.push_back(static_cast<uint32_t>(buf->size()));
      }
      out = ColumnBatch::MakeVarContinuous(batch.type(), std::move(buf), std::move(offsets), batch.nulls());
      break;
    }
  }
  out.flags_ = batch.flags_;
  return out;
}

bool SameValues(const ColumnBatch& a, const ColumnBatch& b) {
  if (a.type() != b.type() || a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a.IsNull(i) != b.IsNull(i)) return false;
    if (!a.IsNull(i) && CompareValues(a.GetValue(i), b.GetValue(i)) != 0) return false;
  }
  return true;
}

}  // namespace mercury
