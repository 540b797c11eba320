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

#include "mercury/scan/expr.h"

#include "mercury/vectors/kernels.h"

namespace mercury {

PredicateExpr PredicateExpr::Compare(Comparison c) {
  PredicateExpr e;
  e.kind = Kind::kCompare;
  e.comparison = std::move(c);
  return e;
}

PredicateExpr PredicateExpr::And(std::vector<PredicateExpr> children) {
  PredicateExpr e;
  e.kind = Kind::kAnd;
  e.children = std::move(children);
  return e;
}

PredicateExpr PredicateExpr::Or(std::vector<PredicateExpr> children) {
  PredicateExpr e;
  e.kind = Kind::kOr;
  e.children = std::move(children);
  return e;
}

PredicateExpr PredicateExpr::Not(PredicateExpr child) {
  PredicateExpr e;
  e.kind = Kind::kNot;
  e.children.push_back(std::move(child));
  return e;
}

bool PredicateExpr::Matches(const Tuple& row) const {
  switch (kind) {
    case Kind::kCompare: return comparison.Matches(row[comparison.column]);
    case Kind::kAnd:
      for (const auto& c : children) {
        if (!c.Matches(row)) return false;
      }
      return true;
    case Kind::kOr:
      for (const auto& c : children) {
        if (c.Matches(row)) return true;
      }
      return false;
    case Kind::kNot: return !children[0].Matches(row);
  }
  return false;
}

Bitmap PredicateExpr::Evaluate(std::span<const ColumnBatch> columns, size_t row_count) const {
  switch (kind) {
    case Kind::kCompare: {
      ColumnBatch batch = columns[comparison.column];
      batch.mutable_flags().all_active = true;
      batch.mutable_flags().selection.reset();
      return EvaluateComparison(batch, comparison.op, comparison.literal);
    }
    case Kind::kAnd: {
      Bitmap out(row_count, true);
      for (const auto& c : children) out &= c.Evaluate(columns, row_count);
      return out;
    }
    case Kind::kOr: {
      Bitmap out(row_count, false);
      for (const auto& c : children) out |= c.Evaluate(columns, row_count);
      return out;
    }
    case Kind::kNot: return ~children[0].Evaluate(columns, row_count);
  }
  return Bitmap(row_count);
}

void PredicateExpr::CollectColumns(std::set<size_t>* out) const {
  if (kind == Kind::kCompare) out->insert(comparison.column);
  for (const auto& c : children) c.CollectColumns(out);
}

std::string PredicateExpr::ToString() const {
  switch (kind) {
    case Kind::kCompare:
      return "c" + std::to_string(comparison.column) + " " + std::string(CompareOpSymbol(comparison.op)) + " " +
             ValueToString(comparison.literal);
    case Kind::kNot: return "NOT (" + children[0].ToString() + ")";
    case Kind::kAnd:
    case Kind::kOr: {
      std::string out = "(";
      for (size_t i = 0; i < children.size(); ++i) {
        if (i) out += kind == Kind::kAnd ? " AND " : " OR ";
        out += children[i].ToString();
      }
      return out + ")";
    }
  }
  return "";
}

}  // namespace mercury
