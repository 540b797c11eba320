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

#include <gtest/gtest.h>

#include "expect_error.h"
#include "history.h"
#include "mercury/scan/expr.h"
#include "mercury/scan/scan.h"
#include "mercury/storage/tablet.h"
#include "oracle.h"

namespace mercury {
namespace {

using testing::OracleTable;
using testing::Rng;

TableSchema Sales(StoreMode mode = StoreMode::kColumn) {
  TableSchema s;
  s.name = "sales";
  s.columns = {{"id", DataType::kInt64, false}, {"region", DataType::kUtf8, true}, {"amount", DataType::kInt64, true}};
  s.pk = {"id"};
  s.store_mode = mode;
  return s;
}

std::unique_ptr<Tablet> Loaded(StoreMode mode, int64_t rows, bool compact = true) {
  auto t = std::make_unique<Tablet>(Sales(mode), testing::SmallTabletOptions());
  for (int64_t i = 0; i < rows; ++i) {
    Value amount = i % 11 == 0 ? Value{} : Value{i};
    t->Insert({i, std::string(i % 4 == 0 ? "north" : "south-" + std::to_string(i % 100)), amount});
  }
  if (compact) t->MajorCompact();
  return t;
}

AggSpec Agg(AggFunc f, std::optional<std::string> col = std::nullopt) { return AggSpec{f, std::move(col), ""}; }

TEST(Scan, PrunesSortedRangeAndCountsBlocks) {
  auto t = Loaded(StoreMode::kColumn, 3000);
  ScanPlan plan;
  plan.snapshot = t->TakeSnapshot();
  plan.predicates = {{0, CompareOp::kLt, int64_t{100}}};
  auto res = Execute(plan);
  EXPECT_EQ(res.rows.size(), 100u);
  EXPECT_GT(res.stats.blocks_total, 10u);
  EXPECT_EQ(res.stats.blocks_pruned + res.stats.blocks_decoded, res.stats.blocks_total);
  EXPECT_LT(res.stats.blocks_decoded, res.stats.blocks_total / 2);
  EXPECT_EQ(res.stats.rows_merged_from_incremental, 0u);
}

TEST(Scan, CountStarIsAnsweredBySketches) {
  auto t = Loaded(StoreMode::kColumn, 3000);
  ScanPlan plan;
  plan.snapshot = t->TakeSnapshot();
  plan.aggs = {Agg(AggFunc::kCountStar), Agg(AggFunc::kSum, "amount")};
  auto res = Execute(plan);
  EXPECT_EQ(res.stats.blocks_decoded, 0u);
  EXPECT_EQ(res.stats.blocks_sketch_answered, res.stats.blocks_total);
  EXPECT_EQ(res.rows[0][0], Value{int64_t{3000}});
  t->Delete({int64_t{7}});
  plan.snapshot = t->TakeSnapshot();
  res = Execute(plan);
  EXPECT_EQ(res.rows[0][0], Value{int64_t{2999}});
  EXPECT_EQ(res.stats.blocks_decoded, 1u);
  EXPECT_EQ(res.stats.rows_merged_from_incremental, 1u);
  EXPECT_EQ(res.stats.blocks_decoded + res.stats.blocks_sketch_answered + res.stats.blocks_pruned,
            res.stats.blocks_total);
}

TEST(Scan, ResidualPredicate) {
  auto t = Loaded(StoreMode::kColumn, 500);
  ScanPlan plan;
  plan.snapshot = t->TakeSnapshot();
  plan.residual = PredicateExpr::Or({PredicateExpr::Compare({0, CompareOp::kLt, int64_t{3}}),
                                     PredicateExpr::Not(PredicateExpr::Compare({0, CompareOp::kLt, int64_t{497}}))});
  plan.projection = {0};
  auto res = Execute(plan);
  std::vector<Tuple> want = {{int64_t{0}}, {int64_t{1}}, {int64_t{2}},
                             {int64_t{497}}, {int64_t{498}}, {int64_t{499}}};
  EXPECT_EQ(res.rows, want);
  plan.projection.clear();
  plan.aggs = {Agg(AggFunc::kCountStar)};
  EXPECT_EQ(Execute(plan).rows[0][0], Value{int64_t{6}});
}

TEST(Scan, ErrorsAndFormats) {
  auto t = Loaded(StoreMode::kColumn, 50);
  ScanPlan plan;
  plan.snapshot = t->TakeSnapshot();
  plan.aggs = {Agg(AggFunc::kSum, "region")};
  EXPECT_ERROR_CODE(Execute(plan), ErrorCode::kUnsupportedAgg);
  plan.aggs = {Agg(AggFunc::kCountStar)};
  EXPECT_ERROR_CODE(RowScanBaseline(plan), ErrorCode::kFormatUnavailable);
  plan.predicates = {{2, CompareOp::kEq, std::string("x")}};
  EXPECT_ERROR_CODE(Execute(plan), ErrorCode::kTypeMismatch);
  plan.predicates = {{9, CompareOp::kEq, int64_t{1}}};
  EXPECT_ERROR_CODE(Execute(plan), ErrorCode::kInvalidArgument);
  plan.predicates.clear();
  plan.aggs = {Agg(AggFunc::kMin, "region"), Agg(AggFunc::kMax, "region")};
  auto res = Execute(plan);
  EXPECT_EQ(res.rows[0][0], Value{std::string("north")});
  EXPECT_EQ(res.rows[0][1], Value{std::string("south-9")});
}

TEST(Scan, GroupByUsesDictCodesOrFallsBack) {
  auto t = Loaded(StoreMode::kColumn, 2000);
  ScanPlan plan;
  plan.snapshot = t->TakeSnapshot();
  plan.group_by = 1;
  plan.aggs = {Agg(AggFunc::kCountStar), Agg(AggFunc::kAvg, "amount")};
  auto pushed = Execute(plan);
  auto plain = ExecuteWithoutPushdown(plan);
  std::string why;
  EXPECT_TRUE(testing::SameRows(pushed.rows, plain.rows, &why)) << why;
  EXPECT_EQ(pushed.rows.size(), 76u);

  // A high-cardinality key cannot be dictionary-coded in every block.
  plan.group_by = 0;
  auto by_id = Execute(plan);
  EXPECT_TRUE(by_id.fell_back_to_hash);
  EXPECT_GT(by_id.group_keys_decoded, 0u);
  EXPECT_EQ(by_id.rows.size(), 2000u);
}

// The three execution paths and the oracle agree on random tables.
TEST(Scan, PathsAgreeWithOracle) {
  Rng rng(40);
  for (int h = 0; h < 15; ++h) {
    auto schema = testing::RandomSchema(rng, "r", StoreMode::kRedundant);
    Tablet t(schema, testing::SmallTabletOptions());
    OracleTable oracle(schema);
    for (int i = 0; i < 500; ++i) {
      ASSERT_EQ(testing::ApplyBoth(t, oracle, testing::RandomOp(rng, oracle, 50)), "");
      if (i == 300) t.MajorCompact();
    }
    auto snap = t.TakeSnapshot();
    for (int q = 0; q < 20; ++q) {
      auto query = testing::MakeRandomQuery(rng, schema, static_cast<testing::QueryShape>(q % 3), 50);
      auto plan = query.Plan(snap);
      auto want = query.Expected(oracle);
      std::string why;
      ASSERT_TRUE(testing::SameRows(Execute(plan).rows, want, &why)) << query.ToString(schema) << ": " << why;
      ASSERT_TRUE(testing::SameRows(RowScanBaseline(plan).rows, want, &why)) << query.ToString(schema) << ": " << why;
      ASSERT_TRUE(testing::SameRows(ExecuteWithoutPushdown(plan).rows, want, &why))
          << query.ToString(schema) << ": " << why;
    }
  }
}

TEST(Scan, RowStoreTableServesAllShapes) {
  auto t = Loaded(StoreMode::kRow, 300);
  ScanPlan plan;
  plan.snapshot = t->TakeSnapshot();
  plan.predicates = {{1, CompareOp::kEq, std::string("north")}};
  plan.aggs = {Agg(AggFunc::kCountStar)};
  EXPECT_EQ(Execute(plan).rows[0][0], Value{int64_t{75}});
  EXPECT_EQ(Execute(plan).stats.blocks_total, 0u);
}

TEST(ScanStats, JsonHasAllCounters) {
  ScanStats s{5, 1, 2, 3, 4};
  auto j = s.ToJson();
  for (const char* key : {"blocks_total", "blocks_pruned", "blocks_sketch_answered", "blocks_decoded",
                          "rows_merged_from_incremental"}) {
    EXPECT_NE(j.find(key), std::string::npos) << key;
  }
}

}  // namespace
}  // namespace mercury
