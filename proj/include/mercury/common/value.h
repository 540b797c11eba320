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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mercury {

enum class DataType : uint8_t { kInt64 = 0, kFloat64 = 1, kUtf8 = 2 };

std::string_view DataTypeName(DataType type);
std::optional<DataType> ParseDataType(std::string_view name);

inline bool IsFixedWidth(DataType type) { return type != DataType::kUtf8; }
inline bool IsNumeric(DataType type) { return type != DataType::kUtf8; }

// A single cell. monostate is SQL NULL.
using Value = std::variant<std::monostate, int64_t, double, std::string>;
using Tuple = std::vector<Value>;

inline bool IsNull(const Value& v) { return std::holds_alternative<std::monostate>(v); }

bool ValueHasType(const Value& v, DataType type);

// Total order with NULL first. Numeric values of different kinds compare
// numerically; a string sorts after any number.
int CompareValues(const Value& a, const Value& b);
int CompareTuples(const Tuple& a, const Tuple& b);

struct TupleLess {
  bool operator()(const Tuple& a, const Tuple& b) const { return CompareTuples(a, b) < 0; }
};

std::string ValueToString(const Value& v);
std::string TupleToString(const Tuple& t);

// Two's-complement wrapping addition; sums never trap on overflow.
inline int64_t WrappingAdd(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) + static_cast<uint64_t>(b));
}
inline int64_t WrappingSub(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) - static_cast<uint64_t>(b));
}

}  // namespace mercury
