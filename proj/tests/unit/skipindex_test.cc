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

#include <set>

#include "expect_error.h"
#include "mercury/skipindex/index_tree.h"
#include "mercury/skipindex/sketch.h"
#include "oracle.h"

namespace mercury {
namespace {

using testing::OracleMatches;
using testing::RandomValue;
using testing::Rng;

struct Blocks {
  DataType type;
  std::vector<std::vector<Value>> rows;
  std::vector<Sketch> sketches;
};

Blocks MakeBlocks(Rng& rng, DataType type, size_t count) {
  Blocks b{type, {}, {}};
  for (size_t i = 0; i < count; ++i) {
    std::vector<Value> v;
    size_t n = 1 + rng.Index(20);
    double null_rate = rng.Chance(0.1) ? 1.0 : 0.1;
    int64_t centre = rng.Int(0, 40);
    for (size_t r = 0; r < n; ++r) {
      Value x = RandomValue(rng, type, 4, null_rate);
      if (auto* i64 = std::get_if<int64_t>(&x)) *i64 += centre;
      if (auto* d = std::get_if<double>(&x)) *d += static_cast<double>(centre);
      v.push_back(x);
    }
    b.sketches.push_back(SketchOf(ColumnBatch::FromValues(type, v)));
    b.rows.push_back(std::move(v));
  }
  return b;
}

TEST(Sketch, ExactOverBatch) {
  std::vector<Value> v = {int64_t{3}, Value{}, int64_t{-2}, int64_t{9}};
  auto s = SketchOf(ColumnBatch::FromValues(DataType::kInt64, v));
  EXPECT_EQ(s.min, Value{int64_t{-2}});
  EXPECT_EQ(s.max, Value{int64_t{9}});
  EXPECT_EQ(s.sum, Value{int64_t{10}});
  EXPECT_EQ(s.null_count, 1u);
  EXPECT_EQ(s.row_count, 4u);
}

TEST(Sketch, MergeEqualsSketchOfConcatenation) {
  Rng rng(20);
  for (auto type : {DataType::kInt64, DataType::kFloat64, DataType::kUtf8}) {
    for (int t = 0; t < 50; ++t) {
      std::vector<Value> a, b;
      size_t na = rng.Index(10), nb = rng.Index(10);
      for (size_t i = 0; i < na; ++i) a.push_back(RandomValue(rng, type, 30, 0.3));
      for (size_t i = 0; i < nb; ++i) b.push_back(RandomValue(rng, type, 30, 0.3));
      std::vector<Value> ab = a;
      ab.insert(ab.end(), b.begin(), b.end());
      auto merged = MergeSketch(SketchOf(ColumnBatch::FromValues(type, a)), SketchOf(ColumnBatch::FromValues(type, b)));
      EXPECT_EQ(merged, SketchOf(ColumnBatch::FromValues(type, ab)));
    }
  }
  EXPECT_ERROR_CODE(MergeSketch(EmptySketch(DataType::kInt64), EmptySketch(DataType::kUtf8)), ErrorCode::kTypeMismatch);
}

TEST(Sketch, SerializeRoundTripNumeric) {
  std::vector<Value> v = {2.5, -1.25, Value{}};
  auto s = SketchOf(ColumnBatch::FromValues(DataType::kFloat64, v));
  ByteWriter w;
  SerializeSketch(s, &w);
  EXPECT_EQ(w.size(), kSketchBytes);
  ByteReader r(w.data());
  EXPECT_EQ(DeserializeSketch(DataType::kFloat64, &r), s);
}

TEST(IndexTree, LevelsAreMergesOfChildren) {
  Rng rng(21);
  auto b = MakeBlocks(rng, DataType::kInt64, 300);
  IndexTree tree(b.sketches, 4);
  EXPECT_EQ(tree.leaf_count(), 300u);
  for (size_t level = 1; level < tree.height(); ++level) {
    for (size_t i = 0; i < 1; ++i) {
      auto [lo, hi] = tree.Children(level, i);
      Sketch m = tree.node(level - 1, lo);
      for (size_t c = lo + 1; c < hi; ++c) m = MergeSketch(m, tree.node(level - 1, c));
      EXPECT_EQ(m, tree.node(level, i));
    }
  }
  auto [first, last] = tree.LeafRange(tree.height() - 1, 0);
  EXPECT_EQ(first, 0u);
  EXPECT_EQ(last, 300u);
}

TEST(Prune, SoundAgainstRows) {
  Rng rng(22);
  for (auto type : {DataType::kInt64, DataType::kFloat64, DataType::kUtf8}) {
    auto b = MakeBlocks(rng, type, 100);
    IndexTree tree(b.sketches, 4);
    for (int t = 0; t < 200; ++t) {
      Value lit = RandomValue(rng, type, 45, 0);
      auto op = static_cast<CompareOp>(rng.Int(0, 5));
      auto res = Prune(tree, op, lit);
      ASSERT_EQ(res.classes.size(), 100u);
      for (size_t i = 0; i < 100; ++i) {
        bool any = false, all = true;
        for (const auto& v : b.rows[i]) {
          bool m = OracleMatches(v, op, lit);
          any |= m;
          all &= m;
        }
        if (res.classes[i] == BlockClass::kAllMatch) {
          EXPECT_TRUE(all);
        }
        if (res.classes[i] == BlockClass::kNoneMatch) {
          EXPECT_FALSE(any);
        }
        // Classification is also tight for a single sketch.
        EXPECT_EQ(res.classes[i], ClassifySketch(b.sketches[i], op, lit));
      }
    }
  }
}

TEST(Prune, InnerNodesSkipSubtrees) {
  std::vector<Sketch> leaves;
  for (int64_t i = 0; i < 256; ++i) {
    std::vector<Value> v = {i * 10, i * 10 + 9};
    leaves.push_back(SketchOf(ColumnBatch::FromValues(DataType::kInt64, v)));
  }
  IndexTree tree(leaves, 16);
  auto res = Prune(tree, CompareOp::kLt, Value{int64_t{15}});
  EXPECT_EQ(res.classes[0], BlockClass::kAllMatch);
  EXPECT_EQ(res.classes[1], BlockClass::kMaybe);
  EXPECT_EQ(res.classes[2], BlockClass::kNoneMatch);
  EXPECT_LT(res.nodes_visited, 256u);
}

TEST(Prune, ConjunctionIntersects) {
  std::vector<Sketch> a, b;
  for (int64_t i = 0; i < 10; ++i) {
    std::vector<Value> va = {i, i};
    std::vector<Value> vb = {10 - i, 10 - i};
    a.push_back(SketchOf(ColumnBatch::FromValues(DataType::kInt64, va)));
    b.push_back(SketchOf(ColumnBatch::FromValues(DataType::kInt64, vb)));
  }
  IndexTree ta(a), tb(b);
  std::vector<const IndexTree*> trees = {&ta, &tb};
  std::vector<Comparison> preds = {{0, CompareOp::kGe, int64_t{3}}, {1, CompareOp::kGe, int64_t{5}}};
  auto res = PruneConjunction(trees, preds, 10);
  for (int64_t i = 0; i < 10; ++i) {
    bool match = i >= 3 && 10 - i >= 5;
    EXPECT_EQ(res.classes[i], match ? BlockClass::kAllMatch : BlockClass::kNoneMatch);
  }
}

TEST(SketchAggregate, EqualsBruteForceAndKeepsDirtyResidual) {
  Rng rng(23);
  auto b = MakeBlocks(rng, DataType::kInt64, 120);
  IndexTree tree(b.sketches, 4);
  for (int t = 0; t < 100; ++t) {
    std::vector<bool> dirty(120);
    for (size_t i = 0; i < 120; ++i) dirty[i] = rng.Chance(0.1);
    std::optional<std::pair<CompareOp, Value>> pred;
    if (rng.Chance(0.7)) pred.emplace(static_cast<CompareOp>(rng.Int(0, 5)), Value{rng.Int(0, 45)});
    for (auto f : {AggFunc::kCountStar, AggFunc::kCountCol, AggFunc::kSum, AggFunc::kMin, AggFunc::kMax}) {
      auto res = SketchAggregate(tree, f, pred, dirty);
      std::set<size_t> residual(res.residual.begin(), res.residual.end());
      for (size_t i = 0; i < 120; ++i) {
        if (dirty[i]) {
          EXPECT_TRUE(residual.count(i)) << "dirty block " << i << " was answered";
        }
      }
      // Finish the residual blocks row by row and compare with a full brute force.
      AggState state = res.partial;
      std::vector<Tuple> all_rows;
      for (size_t i = 0; i < 120; ++i) {
        for (const auto& v : b.rows[i]) {
          bool pass = !pred || OracleMatches(v, pred->first, pred->second);
          if (pass) all_rows.push_back({v});
          if (pass && residual.count(i)) {
            if (f == AggFunc::kCountStar) {
              ++state.count;
            } else if (!IsNull(v)) {
              state.Add(v);
            }
          }
        }
      }
      BoundAgg agg{f, 0, DataType::kInt64};
      auto want = testing::OracleAggregate(all_rows, {{f, 0, DataType::kInt64}});
      EXPECT_TRUE(testing::SameValue(FinalizeAgg(agg, state), want[0])) << AggFuncName(f);
      EXPECT_EQ(res.blocks_answered + res.blocks_skipped + res.residual.size(), 120u);
    }
  }
}

}  // namespace
}  // namespace mercury
