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
#include <span>
#include <vector>

#include "mercury/catalog/schema.h"
#include "mercury/common/value.h"
#include "mercury/vectors/column_batch.h"

namespace mercury {

// An aggregate resolved against a concrete input column.
struct BoundAgg {
  AggFunc func = AggFunc::kCountStar;
  std::optional<size_t> column;  // absent for count_star
  DataType input_type = DataType::kInt64;

  DataType result_type() const { return AggResultType(func, input_type); }
};

// Partial aggregate. `count` is the number of contributing rows (all selected
// rows for count_star, non-null rows otherwise); the sums are only meaningful
// for the numeric type of the input.
struct AggState {
  int64_t count = 0;
  int64_t int_sum = 0;
  double float_sum = 0;
  Value min;
  Value max;

  void Merge(const AggState& other);
  // Adds one non-null value.
  void Add(const Value& v);
  bool operator==(const AggState&) const = default;
};

// count -> int64, sum/min/max -> NULL when no input, avg -> sum / count.
Value FinalizeAgg(const BoundAgg& agg, const AggState& state);

// Folds the active rows of `batch` into `state`. Dispatches to a tight loop
// when the batch has no nulls and no filtered rows.
void Aggregate(const ColumnBatch& batch, AggFunc func, AggState* state);
// Reference path: checks selection and nullness on every row.
void AggregateGeneral(const ColumnBatch& batch, AggFunc func, AggState* state);

}  // namespace mercury
