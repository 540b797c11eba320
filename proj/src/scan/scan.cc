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

#include "mercury/scan/scan.h"

#include <algorithm>
#include <array>
#include <set>
#include <json.hpp>
#include <map>

#include "mercury/common/error.h"
#include "mercury/encoding/encoding.h"
#include "mercury/skipindex/index_tree.h"
#include "mercury/skipindex/sketch.h"
#include "mercury/vectors/kernels.h"

namespace mercury {

std::string ScanStats::ToJson() const {
  nlohmann::ordered_json j;
  j["blocks_total"] = blocks_total;
  j["blocks_pruned"] = blocks_pruned;
  j["blocks_sketch_answered"] = blocks_sketch_answered;
  j["blocks_decoded"] = blocks_decoded;
  j["rows_merged_from_incremental"] = rows_merged_from_incremental;
  return j.dump();
}

std::vector<BoundAgg> BindAggs(const TableSchema& schema, std::span<const AggSpec> aggs) {
  std::vector<BoundAgg> out;
  for (const auto& spec : aggs) {
    BoundAgg b;
    b.func = spec.function;
    if (spec.function == AggFunc::kCountStar) {
      if (spec.column) throw Error(ErrorCode::kInvalidArgument, "count(*) takes no column");
      out.push_back(b);
      continue;
    }
    if (!spec.column) {
      throw Error(ErrorCode::kInvalidArgument, std::string(AggFuncName(spec.function)) + " needs a column");
    }
    b.column = schema.RequireColumn(*spec.column);
    b.input_type = schema.columns[*b.column].type;
    if ((b.func == AggFunc::kSum || b.func == AggFunc::kAvg) && b.input_type == DataType::kUtf8) {
      throw Error(ErrorCode::kUnsupportedAgg, std::string(AggFuncName(b.func)) + " over utf8 column " + *spec.column);
    }
    out.push_back(b);
  }
  return out;
}

namespace {

using ValueMap = std::map<Value, std::vector<AggState>, bool (*)(const Value&, const Value&)>;

bool ValueLess(const Value& a, const Value& b) { return CompareValues(a, b) < 0; }

void CheckPlan(const ScanPlan& plan) {
  if (!plan.snapshot.state || !plan.snapshot.schema) throw Error(ErrorCode::kInvalidArgument, "plan has no snapshot");
  size_t n = plan.snapshot.schema->columns.size();
  for (size_t c : plan.projection) {
    if (c >= n) throw Error(ErrorCode::kInvalidArgument, "projection column out of range");
  }
  for (const auto& p : plan.predicates) {
    if (p.column >= n) throw Error(ErrorCode::kInvalidArgument, "predicate column out of range");
    if (IsNull(p.literal)) continue;
    bool is_string = std::holds_alternative<std::string>(p.literal);
    if (is_string != (plan.snapshot.schema->columns[p.column].type == DataType::kUtf8)) {
      throw Error(ErrorCode::kTypeMismatch, "literal " + ValueToString(p.literal) + " compared with column " +
                                                plan.snapshot.schema->columns[p.column].name);
    }
  }
  if (plan.residual) {
    std::set<size_t> cols;
    plan.residual->CollectColumns(&cols);
    if (!cols.empty() && *cols.rbegin() >= n) throw Error(ErrorCode::kInvalidArgument, "residual column out of range");
  }
  if (plan.group_by && *plan.group_by >= n) throw Error(ErrorCode::kInvalidArgument, "group-by column out of range");
}

std::vector<size_t> OutputColumns(const ScanPlan& plan) {
  if (!plan.projection.empty()) return plan.projection;
  std::vector<size_t> all(plan.snapshot.schema->columns.size());
  for (size_t c = 0; c < all.size(); ++c) all[c] = c;
  return all;
}

bool RowPasses(const ScanPlan& plan, const Tuple& values) {
  for (const auto& p : plan.predicates) {
    if (!p.Matches(values[p.column])) return false;
  }
  return !plan.residual || plan.residual->Matches(values);
}

Tuple Project(const Tuple& values, std::span<const size_t> cols) {
  Tuple out;
  out.reserve(cols.size());
  for (size_t c : cols) out.push_back(values[c]);
  return out;
}

void AddRow(std::span<const BoundAgg> aggs, const Tuple& values, std::vector<AggState>* states) {
  for (size_t a = 0; a < aggs.size(); ++a) {
    if (aggs[a].func == AggFunc::kCountStar) {
      ++(*states)[a].count;
    } else if (!IsNull(values[*aggs[a].column])) {
      (*states)[a].Add(values[*aggs[a].column]);
    }
  }
}

Tuple FinalizeRow(std::span<const BoundAgg> aggs, const std::vector<AggState>& states) {
  Tuple out;
  for (size_t a = 0; a < aggs.size(); ++a) out.push_back(FinalizeAgg(aggs[a], states[a]));
  return out;
}

std::vector<Tuple> GroupRows(std::span<const BoundAgg> aggs, const ValueMap& groups) {
  std::vector<Tuple> rows;
  for (const auto& [key, states] : groups) {
    Tuple row{key};
    for (auto& v : FinalizeRow(aggs, states)) row.push_back(std::move(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

// Decoded columns of one baseline block, materialized on first use.
class BlockReader {
 public:
  BlockReader(const ColumnBaseline& base, size_t block)
      : base_(base), block_(block), cache_(base.column_count()) {}

  const ColumnBatch& Column(size_t c) {
    if (!cache_[c]) cache_[c] = base_.DecodeColumn(c, block_);
    return *cache_[c];
  }
  SourceResolver Resolver() {
    return [this](uint16_t source) { return Column(source); };
  }
  // Every column the expression needs, decoded; the rest left empty.
  std::vector<ColumnBatch> ColumnsFor(const PredicateExpr& expr) {
    std::set<size_t> used;
    expr.CollectColumns(&used);
    std::vector<ColumnBatch> cols(base_.column_count());
    for (size_t c : used) cols[c] = Column(c);
    return cols;
  }

 private:
  const ColumnBaseline& base_;
  size_t block_;
  std::vector<std::optional<ColumnBatch>> cache_;
};

bool InIncremental(std::span<const Row> inc, const Tuple& pk) {
  auto it = std::lower_bound(inc.begin(), inc.end(), pk,
                             [](const Row& r, const Tuple& k) { return CompareTuples(r.pk, k) < 0; });
  return it != inc.end() && CompareTuples(it->pk, pk) == 0;
}

Tuple BlockPk(BlockReader* reader, std::span<const size_t> pk_idx, size_t row) {
  Tuple pk;
  pk.reserve(pk_idx.size());
  for (size_t k : pk_idx) pk.push_back(reader->Column(k).GetValue(row));
  return pk;
}

// Rows of block `b` that are visible and satisfy the plan's predicates.
Bitmap BlockSelection(const ScanPlan& plan, const ColumnBaseline& base, size_t b, BlockClass cls, bool dirty,
                      std::span<const Row> inc, BlockReader* reader) {
  size_t n = base.blocks()[b].row_count;
  Bitmap sel(n, true);
  if (cls != BlockClass::kAllMatch) {
    for (const auto& p : plan.predicates) {
      sel &= EvalPredicateEncoded(base.segment(p.column).blocks[b], p.op, p.literal, reader->Resolver());
      if (sel.NoneSet()) break;
    }
  }
  if (dirty && !sel.NoneSet()) {
    auto pk_idx = plan.snapshot.schema->PkIndices();
    for (size_t r = 0; r < n; ++r) {
      if (sel.Test(r) && InIncremental(inc, BlockPk(reader, pk_idx, r))) sel.Set(r, false);
    }
  }
  if (plan.residual && !sel.NoneSet()) sel &= plan.residual->Evaluate(reader->ColumnsFor(*plan.residual), n);
  return sel;
}

std::vector<BlockClass> ClassifyBlocks(const ScanPlan& plan, const ColumnBaseline& base) {
  std::vector<const IndexTree*> trees;
  for (const auto& p : plan.predicates) trees.push_back(&base.segment(p.column).index);
  return PruneConjunction(trees, plan.predicates, base.block_count()).classes;
}

// Visible rows from the row-format baseline merged with increments.
template <typename Sink>
void RowPathScan(const TabletState& st, std::span<const Row> inc, Sink&& sink) {
  size_t next = 0;
  auto flush_below = [&](const Tuple* pk) {
    while (next < inc.size() && (!pk || CompareTuples(inc[next].pk, *pk) < 0)) {
      if (!inc[next].tombstone) sink(inc[next].values);
      ++next;
    }
  };
  if (st.row_baseline) {
    for (const auto& row : st.row_baseline->rows()) {
      flush_below(&row.pk);
      if (next < inc.size() && CompareTuples(inc[next].pk, row.pk) == 0) continue;
      sink(row.values);
    }
  }
  flush_below(nullptr);
}

ScanResult RowPathExecute(const ScanPlan& plan) {
  const TabletState& st = *plan.snapshot.state;
  auto inc = CollectIncremental(plan.snapshot, PkRange::All());
  ScanResult res;
  res.stats.rows_merged_from_incremental = inc.size();
  auto out_cols = OutputColumns(plan);
  if (plan.group_by) {
    auto aggs = BindAggs(*plan.snapshot.schema, plan.aggs);
    ValueMap groups(ValueLess);
    RowPathScan(st, inc, [&](const Tuple& v) {
      if (!RowPasses(plan, v)) return;
      auto [it, fresh] = groups.try_emplace(v[*plan.group_by], std::vector<AggState>(aggs.size()));
      AddRow(aggs, v, &it->second);
    });
    res.rows = GroupRows(aggs, groups);
  } else if (!plan.aggs.empty()) {
    auto aggs = BindAggs(*plan.snapshot.schema, plan.aggs);
    std::vector<AggState> states(aggs.size());
    RowPathScan(st, inc, [&](const Tuple& v) {
      if (RowPasses(plan, v)) AddRow(aggs, v, &states);
    });
    res.rows.push_back(FinalizeRow(aggs, states));
  } else {
    RowPathScan(st, inc, [&](const Tuple& v) {
      if (RowPasses(plan, v)) res.rows.push_back(Project(v, out_cols));
    });
  }
  return res;
}

}  // namespace

ScanResult ExecuteScan(const ScanPlan& plan) {
  CheckPlan(plan);
  const TabletState& st = *plan.snapshot.state;
  if (!st.column_baseline) {
    ScanPlan rows_only = plan;
    rows_only.aggs.clear();
    rows_only.group_by.reset();
    return RowPathExecute(rows_only);
  }
  const ColumnBaseline& base = *st.column_baseline;
  auto inc = CollectIncremental(plan.snapshot, PkRange::All());
  auto dirty = DirtyBlocks(base, inc);
  auto classes = ClassifyBlocks(plan, base);
  auto out_cols = OutputColumns(plan);
  auto pk_idx = plan.snapshot.schema->PkIndices();

  ScanResult res;
  res.stats.blocks_total = base.block_count();
  res.stats.rows_merged_from_incremental = inc.size();
  size_t next = 0;
  auto emit_incremental = [&](const Tuple* bound, bool inclusive) {
    while (next < inc.size()) {
      if (bound) {
        int c = CompareTuples(inc[next].pk, *bound);
        if (c > 0 || (c == 0 && !inclusive)) break;
      }
      const Row& r = inc[next++];
      if (!r.tombstone && RowPasses(plan, r.values)) res.rows.push_back(Project(r.values, out_cols));
    }
  };

  for (size_t b = 0; b < base.block_count(); ++b) {
    const auto& blk = base.blocks()[b];
    emit_incremental(&blk.first_pk, false);
    if (!dirty[b] && classes[b] == BlockClass::kNoneMatch) {
      ++res.stats.blocks_pruned;
      continue;
    }
    ++res.stats.blocks_decoded;
    BlockReader reader(base, b);
    Bitmap sel = BlockSelection(plan, base, b, classes[b], dirty[b], inc, &reader);
    std::vector<const ColumnBatch*> cols;
    if (!sel.NoneSet()) {
      for (size_t c : out_cols) cols.push_back(&reader.Column(c));
    }
    for (size_t r = 0; r < blk.row_count; ++r) {
      if (dirty[b]) {
        Tuple pk = BlockPk(&reader, pk_idx, r);
        emit_incremental(&pk, false);
      }
      if (!sel.Test(r)) continue;
      Tuple row;
      row.reserve(cols.size());
      for (const auto* col : cols) row.push_back(col->GetValue(r));
      res.rows.push_back(std::move(row));
    }
    emit_incremental(&blk.last_pk, true);
  }
  emit_incremental(nullptr, true);
  return res;
}

ScanResult ExecuteAggPushdown(const ScanPlan& plan) {
  CheckPlan(plan);
  if (plan.aggs.empty()) throw Error(ErrorCode::kInvalidArgument, "aggregate pushdown without aggregates");
  if (plan.group_by) throw Error(ErrorCode::kInvalidArgument, "use group-by pushdown for grouped aggregates");
  auto aggs = BindAggs(*plan.snapshot.schema, plan.aggs);
  const TabletState& st = *plan.snapshot.state;
  if (!st.column_baseline) return RowPathExecute(plan);

  const ColumnBaseline& base = *st.column_baseline;
  auto inc = CollectIncremental(plan.snapshot, PkRange::All());
  auto dirty = DirtyBlocks(base, inc);
  auto classes = ClassifyBlocks(plan, base);
  // A residual predicate has to see every row, so nothing is sketch-answerable.
  std::vector<BlockClass> sketch_classes = classes;
  if (plan.residual) {
    for (auto& c : sketch_classes) {
      if (c == BlockClass::kAllMatch) c = BlockClass::kMaybe;
    }
  }

  ScanResult res;
  res.stats.blocks_total = base.block_count();
  res.stats.rows_merged_from_incremental = inc.size();
  std::vector<AggState> states(aggs.size());
  std::vector<size_t> residual;
  for (size_t a = 0; a < aggs.size(); ++a) {
    size_t col = aggs[a].column.value_or(0);
    auto part = SketchAggregate(base.segment(col).index, aggs[a].func, sketch_classes, dirty);
    states[a].Merge(part.partial);
    if (a == 0) {
      residual = part.residual;
      res.stats.blocks_sketch_answered = part.blocks_answered;
      res.stats.blocks_pruned = part.blocks_skipped;
    }
  }
  res.stats.blocks_decoded = residual.size();
  for (size_t b : residual) {
    BlockReader reader(base, b);
    Bitmap sel = BlockSelection(plan, base, b, classes[b], dirty[b], inc, &reader);
    if (sel.NoneSet()) continue;
    for (size_t a = 0; a < aggs.size(); ++a) {
      if (aggs[a].func == AggFunc::kCountStar) {
        states[a].count += static_cast<int64_t>(sel.CountSet());
        continue;
      }
      ColumnBatch batch = reader.Column(*aggs[a].column);
      std::array<ColumnBatch, 1> one{std::move(batch)};
      Filter(one, sel);
      Aggregate(one[0], aggs[a].func, &states[a]);
    }
  }
  for (const auto& r : inc) {
    if (!r.tombstone && RowPasses(plan, r.values)) AddRow(aggs, r.values, &states);
  }
  res.rows.push_back(FinalizeRow(aggs, states));
  return res;
}

ScanResult ExecuteGroupByPushdown(const ScanPlan& plan) {
  CheckPlan(plan);
  if (!plan.group_by) throw Error(ErrorCode::kInvalidArgument, "group-by pushdown without a group column");
  auto aggs = BindAggs(*plan.snapshot.schema, plan.aggs);
  const TabletState& st = *plan.snapshot.state;
  if (!st.column_baseline) return RowPathExecute(plan);

  const ColumnBaseline& base = *st.column_baseline;
  const size_t g = *plan.group_by;
  const DataType key_type = plan.snapshot.schema->columns[g].type;
  auto inc = CollectIncremental(plan.snapshot, PkRange::All());
  auto dirty = DirtyBlocks(base, inc);
  auto classes = ClassifyBlocks(plan, base);

  ScanResult res;
  res.stats.blocks_total = base.block_count();
  res.stats.rows_merged_from_incremental = inc.size();
  ValueMap groups(ValueLess);
  auto merge_group = [&](const Value& key, const std::vector<AggState>& states) {
    auto [it, fresh] = groups.try_emplace(key, std::vector<AggState>(aggs.size()));
    for (size_t a = 0; a < aggs.size(); ++a) it->second[a].Merge(states[a]);
  };

  for (size_t b = 0; b < base.block_count(); ++b) {
    if (!dirty[b] && classes[b] == BlockClass::kNoneMatch) {
      ++res.stats.blocks_pruned;
      continue;
    }
    ++res.stats.blocks_decoded;
    const size_t n = base.blocks()[b].row_count;
    BlockReader reader(base, b);
    Bitmap sel = BlockSelection(plan, base, b, classes[b], dirty[b], inc, &reader);
    if (sel.NoneSet()) continue;
    std::vector<ColumnBatch> inputs;
    for (const auto& agg : aggs) {
      // count(*) only needs something of the right length.
      inputs.push_back(agg.column ? reader.Column(*agg.column) : ColumnBatch::FromInt64(std::vector<int64_t>(n)));
    }
    const EncodedBlock& key_block = base.segment(g).blocks[b];
    if (key_block.encoding_id == EncodingId::kDict) {
      DictCodes dc = DecodeDictCodes(key_block);
      ArrayGroupBy agb(static_cast<uint32_t>(dc.dictionary.size()), aggs);
      BatchFlags flags;
      flags.has_null = !key_block.null_bitmap.NoneSet();
      flags.all_active = false;
      flags.selection = sel;
      agb.Consume(dc.codes, &key_block.null_bitmap, flags, inputs);
      for (const auto& grp : std::move(agb).Finish()) {
        merge_group(grp.is_null ? Value{} : dc.dictionary.GetValue(grp.code), grp.states);
      }
      continue;
    }
    res.fell_back_to_hash = true;
    res.group_keys_decoded += sel.CountSet();
    std::vector<ColumnBatch> keys{reader.Column(g)};
    Filter(keys, sel);
    HashGroupBy hgb({key_type}, aggs);
    hgb.Consume(keys, inputs);
    GroupTable table = std::move(hgb).Finish();
    for (size_t i = 0; i < table.size(); ++i) merge_group(table.keys[i][0], table.states[i]);
  }
  for (const auto& r : inc) {
    if (r.tombstone || !RowPasses(plan, r.values)) continue;
    auto [it, fresh] = groups.try_emplace(r.values[g], std::vector<AggState>(aggs.size()));
    AddRow(aggs, r.values, &it->second);
  }
  res.rows = GroupRows(aggs, groups);
  return res;
}

ScanResult RowScanBaseline(const ScanPlan& plan) {
  CheckPlan(plan);
  if (!plan.snapshot.schema->HasRowBaseline()) {
    throw Error(ErrorCode::kFormatUnavailable, "table " + plan.snapshot.schema->name + " has no row-format baseline");
  }
  return RowPathExecute(plan);
}

ScanResult ExecuteWithoutPushdown(const ScanPlan& plan) {
  CheckPlan(plan);
  const TableSchema& schema = *plan.snapshot.schema;
  ScanResult res;
  std::vector<Tuple> rows;
  MergeScan(plan.snapshot, PkRange::All(), {}, [&](const Tuple& v) {
    if (RowPasses(plan, v)) rows.push_back(v);
  });
  if (plan.aggs.empty() && !plan.group_by) {
    auto out_cols = OutputColumns(plan);
    for (const auto& r : rows) res.rows.push_back(Project(r, out_cols));
    return res;
  }
  auto aggs = BindAggs(schema, plan.aggs);
  std::vector<ColumnBatch> cols;
  std::vector<Value> cells(rows.size());
  for (size_t c = 0; c < schema.columns.size(); ++c) {
    for (size_t r = 0; r < rows.size(); ++r) cells[r] = rows[r][c];
    cols.push_back(ColumnBatch::FromValues(schema.columns[c].type, cells));
  }
  std::vector<ColumnBatch> inputs;
  for (const auto& agg : aggs) {
    inputs.push_back(agg.column ? cols[*agg.column] : ColumnBatch::FromInt64(std::vector<int64_t>(rows.size())));
  }
  if (plan.group_by) {
    HashGroupBy hgb({schema.columns[*plan.group_by].type}, aggs);
    std::vector<ColumnBatch> keys{cols[*plan.group_by]};
    hgb.Consume(keys, inputs);
    GroupTable table = std::move(hgb).Finish();
    ValueMap groups(ValueLess);
    for (size_t i = 0; i < table.size(); ++i) groups.emplace(table.keys[i][0], table.states[i]);
    res.rows = GroupRows(aggs, groups);
    return res;
  }
  std::vector<AggState> states(aggs.size());
  for (size_t a = 0; a < aggs.size(); ++a) {
    if (aggs[a].func == AggFunc::kCountStar) {
      states[a].count = static_cast<int64_t>(rows.size());
    } else {
      Aggregate(inputs[a], aggs[a].func, &states[a]);
    }
  }
  res.rows.push_back(FinalizeRow(aggs, states));
  return res;
}

ScanResult Execute(const ScanPlan& plan) {
  if (plan.group_by) return ExecuteGroupByPushdown(plan);
  if (!plan.aggs.empty()) return ExecuteAggPushdown(plan);
  return ExecuteScan(plan);
}

}  // namespace mercury
