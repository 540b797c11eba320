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

#include <json.hpp>
#include <span>

#include "mercury/common/value.h"

namespace mercury {

nlohmann::json ValueToJson(const Value& v);
// Numbers are coerced to `type`.
Value ValueFromJson(const nlohmann::json& j, DataType type);
nlohmann::json TupleToJson(const Tuple& t);
Tuple TupleFromJson(const nlohmann::json& j, std::span<const DataType> types);

}  // namespace mercury
