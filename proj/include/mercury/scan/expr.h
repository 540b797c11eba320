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

#include <memory>
#include <set>
#include <span>
#include <vector>

#include "mercury/common/bitmap.h"
#include "mercury/common/predicate.h"
#include "mercury/vectors/column_batch.h"

namespace mercury {

// Boolean tree over column comparisons. Two-valued: a comparison involving
// NULL is false, so NOT of it is true.
struct PredicateExpr {
  enum class Kind : uint8_t { kCompare, kAnd, kOr, kNot };

  Kind kind = Kind::kCompare;
  Comparison comparison;
  std::vector<PredicateExpr> children;

  static PredicateExpr Compare(Comparison c);
  static PredicateExpr And(std::vector<PredicateExpr> children);
  static PredicateExpr Or(std::vector<PredicateExpr> children);
  static PredicateExpr Not(PredicateExpr child);

  bool Matches(const Tuple& row) const;
  // `columns[c]` must be decoded for every column c the expression reads;
  // other entries may be empty batches. Selection flags are ignored.
  Bitmap Evaluate(std::span<const ColumnBatch> columns, size_t row_count) const;
  void CollectColumns(std::set<size_t>* out) const;
  std::string ToString() const;
};

}  // namespace mercury
