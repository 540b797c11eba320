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

#include "mercury/vectors/kernels.h"

#include <bit>
#include <cstring>

#include "mercury/common/error.h"

namespace mercury {

void Filter(std::span<ColumnBatch> batches, const Bitmap& keep) {
  for (auto& batch : batches) {
    if (keep.size() != batch.size()) {
      throw Error(ErrorCode::kLengthMismatch, "filter bitmap has " + std::to_string(keep.size()) + " bits for " +
                                                  std::to_string(batch.size()) + " rows");
    }
  }
  for (auto& batch : batches) {
    auto& flags = batch.mutable_flags();
    if (flags.all_active) {
      if (keep.AllSet()) continue;
      flags.selection = keep;
    } else {
      *flags.selection &= keep;
    }
    flags.all_active = flags.selection->AllSet();
    if (flags.all_active) flags.selection.reset();
  }
}

Bitmap EvaluateComparison(const ColumnBatch& batch, CompareOp op, const Value& literal) {
  Bitmap out(batch.size());
  if (IsNull(literal)) return out;
  bool numeric_lit = !std::holds_alternative<std::string>(literal);
  if (IsNumeric(batch.type()) != numeric_lit) {
    throw Error(ErrorCode::kTypeMismatch, "comparison of " + std::string(DataTypeName(batch.type())) + " with " +
                                              ValueToString(literal));
  }
  if (batch.type() == DataType::kInt64 && std::holds_alternative<int64_t>(literal)) {
    int64_t lit = std::get<int64_t>(literal);
    for (size_t i = 0; i < batch.size(); ++i) {
      if (!batch.IsActive(i) || batch.IsNull(i)) continue;
      int64_t v = batch.GetInt64(i);
      out.Set(i, ApplyCompare(op, v < lit ? -1 : (v > lit ? 1 : 0)));
    }
    return out;
  }
  for (size_t i = 0; i < batch.size(); ++i) {
    if (!batch.IsActive(i) || batch.IsNull(i)) continue;
    out.Set(i, ApplyCompare(op, CompareValues(batch.GetValue(i), literal)));
  }
  return out;
}

namespace {

void AppendBigEndian(uint64_t v, std::string* out) {
  for (int shift = 56; shift >= 0; shift -= 8) out->push_back(static_cast<char>((v >> shift) & 0xFF));
}

uint64_t OrderedFloatBits(double d) {
  if (d == 0) d = 0;  // -0.0 and 0.0 must encode identically
  uint64_t bits = std::bit_cast<uint64_t>(d);
  return (bits & (uint64_t{1} << 63)) ? ~bits : bits ^ (uint64_t{1} << 63);
}

}  // namespace

void AppendSortKey(const Value& value, DataType type, std::string* out) {
  if (IsNull(value)) {
    out->push_back('\x00');
    return;
  }
  out->push_back('\x01');
  switch (type) {
    case DataType::kInt64:
      AppendBigEndian(static_cast<uint64_t>(std::get<int64_t>(value)) ^ (uint64_t{1} << 63), out);
      break;
    case DataType::kFloat64:
      AppendBigEndian(OrderedFloatBits(std::get<double>(value)), out);
      break;
    case DataType::kUtf8:
      for (char c : std::get<std::string>(value)) {
        out->push_back(c);
        if (c == '\x00') out->push_back('\xFF');
      }
      out->push_back('\x00');
      out->push_back('\x00');
      break;
  }
}

std::vector<std::string> EncodeSortKey(std::span<const ColumnBatch> columns) {
  if (columns.empty()) return {};
  size_t n = columns[0].size();
  for (const auto& c : columns) {
    if (c.size() != n) throw Error(ErrorCode::kLengthMismatch, "sort key columns differ in length");
  }
  std::vector<std::string> keys(n);
  for (const auto& col : columns) {
    for (size_t i = 0; i < n; ++i) AppendSortKey(col.GetValue(i), col.type(), &keys[i]);
  }
  return keys;
}

std::string EncodeSortKey(const Tuple& tuple, std::span<const DataType> types) {
  std::string key;
  for (size_t i = 0; i < tuple.size(); ++i) AppendSortKey(tuple[i], types[i], &key);
  return key;
}

std::vector<ColumnBatch> GroupTable::KeyBatches(std::span<const DataType> key_types) const {
  std::vector<ColumnBatch> out;
  for (size_t c = 0; c < key_types.size(); ++c) {
    std::vector<Value> col;
    col.reserve(keys.size());
    for (const auto& k : keys) col.push_back(k[c]);
    out.push_back(ColumnBatch::FromValues(key_types[c], col));
  }
  return out;
}

std::vector<Tuple> GroupTable::Rows(std::span<const BoundAgg> aggs) const {
  std::vector<Tuple> rows;
  rows.reserve(keys.size());
  for (size_t g = 0; g < keys.size(); ++g) {
    Tuple row = keys[g];
    for (size_t a = 0; a < aggs.size(); ++a) row.push_back(FinalizeAgg(aggs[a], states[g][a]));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

void AccumulateRow(const BoundAgg& agg, const ColumnBatch& input, size_t row, AggState* state) {
  if (agg.func == AggFunc::kCountStar) {
    ++state->count;
    return;
  }
  if (input.IsNull(row)) return;
  if (agg.func == AggFunc::kCountCol) {
    ++state->count;
    return;
  }
  state->Add(input.GetValue(row));
}

void CheckInputs(std::span<const BoundAgg> aggs, std::span<const ColumnBatch> inputs, size_t rows) {
  if (inputs.size() != aggs.size()) throw Error(ErrorCode::kLengthMismatch, "one input batch per aggregate");
  for (size_t a = 0; a < aggs.size(); ++a) {
    if (inputs[a].size() != rows) throw Error(ErrorCode::kLengthMismatch, "aggregate input length");
    if ((aggs[a].func == AggFunc::kSum || aggs[a].func == AggFunc::kAvg) && !IsNumeric(inputs[a].type())) {
      throw Error(ErrorCode::kTypeMismatch, "sum/avg over utf8");
    }
  }
}

}  // namespace

HashGroupBy::HashGroupBy(std::vector<DataType> key_types, std::vector<BoundAgg> aggs)
    : key_types_(std::move(key_types)), aggs_(std::move(aggs)) {}

void HashGroupBy::Consume(std::span<const ColumnBatch> keys, std::span<const ColumnBatch> inputs) {
  if (keys.size() != key_types_.size()) throw Error(ErrorCode::kLengthMismatch, "key column count");
  size_t n = keys.empty() ? (inputs.empty() ? 0 : inputs[0].size()) : keys[0].size();
  for (size_t k = 0; k < keys.size(); ++k) {
    if (keys[k].size() != n) throw Error(ErrorCode::kLengthMismatch, "key column length");
    if (keys[k].type() != key_types_[k]) throw Error(ErrorCode::kTypeMismatch, "key column type");
  }
  CheckInputs(aggs_, inputs, n);
  const ColumnBatch* driver = !keys.empty() ? &keys[0] : (!inputs.empty() ? &inputs[0] : nullptr);
  std::string key;
  for (size_t i = 0; i < n; ++i) {
    if (driver && !driver->IsActive(i)) continue;
    key.clear();
    for (size_t k = 0; k < keys.size(); ++k) AppendSortKey(keys[k].GetValue(i), key_types_[k], &key);
    auto [it, inserted] = index_.try_emplace(key, static_cast<uint32_t>(table_.keys.size()));
    if (inserted) {
      Tuple tuple;
      tuple.reserve(keys.size());
      for (const auto& k : keys) tuple.push_back(k.GetValue(i));
      table_.keys.push_back(std::move(tuple));
      table_.states.emplace_back(aggs_.size());
    }
    auto& states = table_.states[it->second];
    for (size_t a = 0; a < aggs_.size(); ++a) AccumulateRow(aggs_[a], inputs[a], i, &states[a]);
  }
}

GroupTable HashGroupBy::Finish() && { return std::move(table_); }

ArrayGroupBy::ArrayGroupBy(uint32_t dict_size, std::vector<BoundAgg> aggs)
    : dict_size_(dict_size), aggs_(std::move(aggs)), rows_(dict_size + 1, 0),
      slots_((static_cast<size_t>(dict_size) + 1) * aggs_.size()) {
  if (dict_size > kArrayGroupByThreshold) {
    throw Error(ErrorCode::kInvalidArgument, "dictionary of " + std::to_string(dict_size) +
                                                 " codes exceeds the array group-by threshold");
  }
}

void ArrayGroupBy::Consume(std::span<const uint32_t> codes, const Bitmap* nulls, const BatchFlags& flags,
                           std::span<const ColumnBatch> inputs) {
  size_t n = codes.size();
  CheckInputs(aggs_, inputs, n);
  if (!flags.all_active && flags.selection->size() != n) throw Error(ErrorCode::kLengthMismatch, "selection");
  size_t width = aggs_.size();
  for (size_t i = 0; i < n; ++i) {
    if (!flags.all_active && !flags.selection->Test(i)) continue;
    uint32_t slot;
    if (nulls && nulls->Test(i)) {
      slot = dict_size_;
    } else {
      slot = codes[i];
      if (slot >= dict_size_) {
        throw Error(ErrorCode::kCodeOutOfRange, "code " + std::to_string(slot) + " >= dictionary size " +
                                                    std::to_string(dict_size_));
      }
    }
    ++rows_[slot];
    AggState* states = &slots_[static_cast<size_t>(slot) * width];
    for (size_t a = 0; a < width; ++a) AccumulateRow(aggs_[a], inputs[a], i, &states[a]);
  }
}

std::vector<ArrayGroupBy::Group> ArrayGroupBy::Finish() && {
  std::vector<Group> out;
  size_t width = aggs_.size();
  for (uint32_t slot = 0; slot <= dict_size_; ++slot) {
    if (rows_[slot] == 0) continue;
    Group g;
    g.code = slot == dict_size_ ? 0 : slot;
    g.is_null = slot == dict_size_;
    g.states.assign(slots_.begin() + static_cast<ptrdiff_t>(slot * width),
                    slots_.begin() + static_cast<ptrdiff_t>((slot + 1) * width));
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

bool AnyNullKey(std::span<const ColumnBatch> keys, size_t row) {
  for (const auto& k : keys) {
    if (k.IsNull(row)) return true;
  }
  return false;
}

uint64_t KeyWord(const ColumnBatch& col, size_t row) {
  if (col.type() == DataType::kFloat64) {
    double d = col.GetFloat64(row);
    if (d == 0) d = 0;
    return std::bit_cast<uint64_t>(d);
  }
  return static_cast<uint64_t>(col.GetInt64(row));
}

// Packs the fixed-width key columns of one row into a single fixed-length key.
std::string PackKey(std::span<const ColumnBatch> keys, size_t row) {
  std::string packed(keys.size() * 8, '\0');
  for (size_t k = 0; k < keys.size(); ++k) {
    uint64_t w = KeyWord(keys[k], row);
    std::memcpy(packed.data() + k * 8, &w, 8);
  }
  return packed;
}

void CheckJoinKeys(std::span<const ColumnBatch> keys, const char* side) {
  for (const auto& k : keys) {
    if (!IsFixedWidth(k.type())) {
      throw Error(ErrorCode::kNonFixedKey, std::string(side) + " join key of type utf8 is not fixed-width");
    }
  }
  for (const auto& k : keys) {
    if (k.size() != keys[0].size()) throw Error(ErrorCode::kLengthMismatch, "join key lengths differ");
  }
}

template <typename Key, typename KeyFn>
std::vector<std::pair<uint32_t, uint32_t>> JoinImpl(std::span<const ColumnBatch> build,
                                                    std::span<const ColumnBatch> probe, KeyFn key_of) {
  std::unordered_map<Key, std::vector<uint32_t>> table;
  size_t build_rows = build[0].size();
  for (size_t i = 0; i < build_rows; ++i) {
    if (!build[0].IsActive(i) || AnyNullKey(build, i)) continue;
    table[key_of(build, i)].push_back(static_cast<uint32_t>(i));
  }
  std::vector<std::pair<uint32_t, uint32_t>> out;
  size_t probe_rows = probe[0].size();
  for (size_t j = 0; j < probe_rows; ++j) {
    if (!probe[0].IsActive(j) || AnyNullKey(probe, j)) continue;
    auto it = table.find(key_of(probe, j));
    if (it == table.end()) continue;
    for (uint32_t b : it->second) out.emplace_back(b, static_cast<uint32_t>(j));
  }
  return out;
}

}  // namespace

std::vector<std::pair<uint32_t, uint32_t>> HashJoin(std::span<const ColumnBatch> build_keys,
                                                    std::span<const ColumnBatch> probe_keys) {
  if (build_keys.empty() || build_keys.size() != probe_keys.size()) {
    throw Error(ErrorCode::kInvalidArgument, "join needs the same non-zero number of keys on both sides");
  }
  CheckJoinKeys(build_keys, "build");
  CheckJoinKeys(probe_keys, "probe");
  for (size_t k = 0; k < build_keys.size(); ++k) {
    if (build_keys[k].type() != probe_keys[k].type()) throw Error(ErrorCode::kTypeMismatch, "join key types differ");
  }
  if (build_keys.size() == 1) {
    return JoinImpl<uint64_t>(build_keys, probe_keys,
                              [](std::span<const ColumnBatch> keys, size_t row) { return KeyWord(keys[0], row); });
  }
  return JoinImpl<std::string>(build_keys, probe_keys, PackKey);
}

}  // namespace mercury
