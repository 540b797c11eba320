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

#include "mercury/mview/value_json.h"

#include "mercury/common/error.h"

namespace mercury {

nlohmann::json ValueToJson(const Value& v) {
  if (IsNull(v)) return nullptr;
  if (const auto* i = std::get_if<int64_t>(&v)) return *i;
  if (const auto* d = std::get_if<double>(&v)) return *d;
  return std::get<std::string>(v);
}

Value ValueFromJson(const nlohmann::json& j, DataType type) {
  if (j.is_null()) return std::monostate{};
  switch (type) {
    case DataType::kInt64:
      if (!j.is_number_integer()) throw Error(ErrorCode::kTypeMismatch, "expected an integer, got " + j.dump());
      return j.get<int64_t>();
    case DataType::kFloat64:
      if (!j.is_number()) throw Error(ErrorCode::kTypeMismatch, "expected a number, got " + j.dump());
      return j.get<double>();
    case DataType::kUtf8:
      if (!j.is_string()) throw Error(ErrorCode::kTypeMismatch, "expected a string, got " + j.dump());
      return j.get<std::string>();
  }
  return std::monostate{};
}

nlohmann::json TupleToJson(const Tuple& t) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& v : t) arr.push_back(ValueToJson(v));
  return arr;
}

Tuple TupleFromJson(const nlohmann::json& j, std::span<const DataType> types) {
  if (!j.is_array() || j.size() != types.size()) throw Error(ErrorCode::kCorruption, "tuple arity mismatch");
  Tuple t;
  for (size_t i = 0; i < types.size(); ++i) t.push_back(ValueFromJson(j[i], types[i]));
  return t;
}

}  // namespace mercury
