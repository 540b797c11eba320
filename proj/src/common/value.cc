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

#include "mercury/common/value.h"

#include <charconv>
#include <cmath>

namespace mercury {

std::string_view DataTypeName(DataType type) {
  switch (type) {
    case DataType::kInt64: return "int64";
    case DataType::kFloat64: return "float64";
    case DataType::kUtf8: return "utf8";
  }
  return "unknown";
}

std::optional<DataType> ParseDataType(std::string_view name) {
  if (name == "int64") return DataType::kInt64;
  if (name == "float64") return DataType::kFloat64;
  if (name == "utf8") return DataType::kUtf8;
  return std::nullopt;
}

bool ValueHasType(const Value& v, DataType type) {
  switch (type) {
    case DataType::kInt64: return std::holds_alternative<int64_t>(v);
    case DataType::kFloat64: return std::holds_alternative<double>(v);
    case DataType::kUtf8: return std::holds_alternative<std::string>(v);
  }
  return false;
}

namespace {

template <typename T>
int Cmp3(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

int CompareMixed(int64_t a, double b) {
  // Exact for |a| < 2^53, which is all mixed comparisons the engine produces.
  double da = static_cast<double>(a);
  return Cmp3(da, b);
}

}  // namespace

int CompareValues(const Value& a, const Value& b) {
  if (a.index() == b.index()) {
    switch (a.index()) {
      case 0: return 0;
      case 1: return Cmp3(std::get<int64_t>(a), std::get<int64_t>(b));
      case 2: return Cmp3(std::get<double>(a), std::get<double>(b));
      case 3: {
        int c = std::get<std::string>(a).compare(std::get<std::string>(b));
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
      }
    }
  }
  if (IsNull(a)) return -1;
  if (IsNull(b)) return 1;
  if (a.index() == 1 && b.index() == 2) return CompareMixed(std::get<int64_t>(a), std::get<double>(b));
  if (a.index() == 2 && b.index() == 1) return -CompareMixed(std::get<int64_t>(b), std::get<double>(a));
  return a.index() < b.index() ? -1 : 1;
}

int CompareTuples(const Tuple& a, const Tuple& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    int c = CompareValues(a[i], b[i]);
    if (c != 0) return c;
  }
  return Cmp3(a.size(), b.size());
}

std::string ValueToString(const Value& v) {
  switch (v.index()) {
    case 0: return "NULL";
    case 1: return std::to_string(std::get<int64_t>(v));
    case 2: {
      char buf[32];
      auto res = std::to_chars(buf, buf + sizeof(buf), std::get<double>(v));
      return std::string(buf, res.ptr);
    }
    default: return std::get<std::string>(v);
  }
}

std::string TupleToString(const Tuple& t) {
  std::string out = "(";
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += ValueToString(t[i]);
  }
  return out + ")";
}

}  // namespace mercury
