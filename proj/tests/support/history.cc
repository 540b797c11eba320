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

#include "history.h"

#include "mercury/common/error.h"

namespace mercury::testing {

TableSchema RandomSchema(Rng& rng, const std::string& name, StoreMode mode) {
  static const DataType kTypes[] = {DataType::kInt64, DataType::kFloat64, DataType::kUtf8};
  TableSchema s;
  s.name = name;
  s.store_mode = mode;
  DataType pk_type = rng.Chance(0.75) ? DataType::kInt64 : DataType::kUtf8;
  s.columns.push_back({"k", pk_type, false});
  s.columns.push_back({"a", kTypes[rng.Index(3)], true});
  s.columns.push_back({"b", kTypes[rng.Index(3)], rng.Chance(0.7)});
  s.pk = {"k"};
  return s;
}

TabletOptions SmallTabletOptions() {
  TabletOptions o;
  o.memtable_freeze_bytes = 16 << 10;
  o.baseline.block_target_bytes = 512;
  o.baseline.split_budget = 2;
  return o;
}

namespace {

Tuple RandomRow(Rng& rng, const TableSchema& schema, int64_t domain) {
  Tuple row;
  for (const auto& col : schema.columns) {
    bool is_pk = col.name == "k";
    row.push_back(RandomValue(rng, col.type, is_pk ? domain * 4 : domain, col.nullable ? 0.15 : 0.0));
  }
  return row;
}

}  // namespace

DmlOp RandomOp(Rng& rng, const OracleTable& oracle, int64_t domain) {
  const TableSchema& schema = oracle.schema();
  DmlOp op;
  auto keys = oracle.Keys();
  int64_t roll = rng.Int(0, 99);
  if (keys.empty() || roll < 50) {
    op.kind = DmlOp::Kind::kInsert;
    op.row = RandomRow(rng, schema, domain);
    if (!keys.empty() && rng.Chance(0.05)) op.row[0] = keys[rng.Index(keys.size())][0];
    return op;
  }
  bool missing = rng.Chance(0.03);
  Tuple pk = missing ? Tuple{RandomValue(rng, schema.columns[0].type, domain * 4, 0)} : keys[rng.Index(keys.size())];
  op.pk = pk;
  if (roll < 80) {
    op.kind = DmlOp::Kind::kUpdate;
    Tuple fresh = RandomRow(rng, schema, domain);
    for (size_t c = 1; c < schema.columns.size(); ++c) {
      if (rng.Chance(0.6)) op.assignments.emplace_back(c, fresh[c]);
    }
    if (rng.Chance(0.15)) op.assignments.emplace_back(0, fresh[0]);
    if (op.assignments.empty()) op.assignments.emplace_back(1, fresh[1]);
  } else {
    op.kind = DmlOp::Kind::kDelete;
  }
  return op;
}

std::string ApplyBoth(Tablet& tablet, OracleTable& oracle, const DmlOp& op) {
  bool expect = false;
  switch (op.kind) {
    case DmlOp::Kind::kInsert: expect = oracle.Insert(op.row); break;
    case DmlOp::Kind::kUpdate: expect = oracle.Update(op.pk, op.assignments); break;
    case DmlOp::Kind::kDelete: expect = oracle.Delete(op.pk); break;
  }
  bool ok = true;
  ErrorCode code{};
  try {
    switch (op.kind) {
      case DmlOp::Kind::kInsert: tablet.Insert(op.row); break;
      case DmlOp::Kind::kUpdate: tablet.Update(op.pk, op.assignments); break;
      case DmlOp::Kind::kDelete: tablet.Delete(op.pk); break;
    }
  } catch (const Error& e) {
    ok = false;
    code = e.code();
    if (code != ErrorCode::kDuplicateKey && code != ErrorCode::kKeyNotFound) return e.what();
  }
  if (ok != expect) {
    return std::string("engine ") + (ok ? "accepted" : "rejected (" + std::string(ErrorCodeName(code)) + ")") +
           " an operation the oracle " + (expect ? "accepted" : "rejected");
  }
  return {};
}

ScanPlan RandomQuery::Plan(const Snapshot& snapshot) const {
  ScanPlan p;
  p.snapshot = snapshot;
  p.predicates = preds;
  p.projection = projection;
  p.aggs = aggs;
  p.group_by = group_by;
  return p;
}

std::vector<Tuple> RandomQuery::Expected(const OracleTable& oracle) const {
  if (group_by) return oracle.GroupBy(preds, *group_by, aggs);
  if (!aggs.empty()) return {oracle.Aggregate(preds, aggs)};
  return oracle.Scan(preds, projection);
}

std::string RandomQuery::ToString(const TableSchema& schema) const {
  std::string s;
  for (const auto& a : aggs) {
    s += std::string(AggFuncName(a.function)) + "(" + a.column.value_or("*") + ") ";
  }
  for (size_t c : projection) s += schema.columns[c].name + " ";
  s += "where";
  for (const auto& p : preds) {
    s += " " + schema.columns[p.column].name + std::string(CompareOpSymbol(p.op)) + ValueToString(p.literal);
  }
  if (group_by) s += " group by " + schema.columns[*group_by].name;
  return s;
}

RandomQuery MakeRandomQuery(Rng& rng, const TableSchema& schema, QueryShape shape, int64_t domain) {
  RandomQuery q;
  size_t n_preds = rng.Index(3);
  for (size_t i = 0; i < n_preds; ++i) {
    size_t col = rng.Index(schema.columns.size());
    q.preds.push_back(RandomComparison(rng, schema, col, col == 0 ? domain * 4 : domain));
  }
  switch (shape) {
    case QueryShape::kScan: {
      size_t n = rng.Index(schema.columns.size() + 1);
      for (size_t i = 0; i < n; ++i) q.projection.push_back(rng.Index(schema.columns.size()));
      break;
    }
    case QueryShape::kGroupBy:
      q.group_by = 1 + rng.Index(schema.columns.size() - 1);
      [[fallthrough]];
    case QueryShape::kAggregate: {
      q.aggs.push_back({AggFunc::kCountStar, std::nullopt, "n"});
      size_t n = 1 + rng.Index(3);
      for (size_t i = 0; i < n; ++i) {
        size_t col = rng.Index(schema.columns.size());
        std::vector<AggFunc> funcs = {AggFunc::kCountCol, AggFunc::kMin, AggFunc::kMax};
        if (schema.columns[col].type != DataType::kUtf8) {
          funcs.push_back(AggFunc::kSum);
          funcs.push_back(AggFunc::kAvg);
        }
        q.aggs.push_back({funcs[rng.Index(funcs.size())], schema.columns[col].name, "x" + std::to_string(i)});
      }
      break;
    }
  }
  return q;
}

}  // namespace mercury::testing
