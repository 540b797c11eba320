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

#include <cmath>
#include <filesystem>
#include <limits>

#include "expect_error.h"
#include "history.h"
#include "mercury/common/byte_io.h"
#include "mercury/storage/baseline.h"
#include "mercury/storage/memtable.h"
#include "mercury/storage/sstable.h"
#include "mercury/storage/tablet.h"
#include "oracle.h"

namespace mercury {
namespace {

using testing::OracleTable;
using testing::Rng;

TableSchema Kv(StoreMode mode = StoreMode::kColumn) {
  TableSchema s;
  s.name = "kv";
  s.columns = {{"k", DataType::kInt64, false}, {"v", DataType::kFloat64, true}, {"s", DataType::kUtf8, true}};
  s.pk = {"k"};
  s.store_mode = mode;
  return s;
}

Row MakeRow(int64_t k, uint64_t version, bool tombstone = false) {
  return Row{{k}, {k, static_cast<double>(version), std::string("x")}, version, tombstone};
}

TEST(MemTable, VersionVisibility) {
  MemTable m;
  m.Put(MakeRow(1, 3));
  m.Put(MakeRow(1, 5));
  m.Put(MakeRow(1, 8, true));
  EXPECT_FALSE(m.Get({int64_t{1}}, 2));
  EXPECT_EQ(m.Get({int64_t{1}}, 4)->version, 3u);
  EXPECT_EQ(m.Get({int64_t{1}}, 7)->version, 5u);
  EXPECT_TRUE(m.Get({int64_t{1}}, 9)->tombstone);
  EXPECT_EQ(m.version_count(), 3u);
  std::vector<Row> out;
  m.CollectVisible(6, PkRange::All(), &out);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].version, 5u);
}

TEST(RowSSTable, RoundTripAndChecksum) {
  auto schema = Kv();
  std::vector<Row> rows;
  for (int64_t k = 0; k < 50; ++k) {
    rows.push_back(MakeRow(k, 10));
    if (k % 3 == 0) rows.push_back(MakeRow(k, 20, k % 2 == 0));
  }
  rows[1].values[1] = Value{};
  rows[2].values[2] = std::string("é\0x", 4);
  auto t = RowSSTable::Build(4, SSTableLevel::kMinor, rows);
  EXPECT_EQ(t->meta().min_version, 10u);
  EXPECT_EQ(t->meta().max_version, 20u);
  auto bytes = t->Serialize(schema);
  auto back = RowSSTable::Parse(4, SSTableLevel::kMinor, bytes, schema);
  EXPECT_EQ(back->rows(), t->rows());
  EXPECT_EQ(back->Get({int64_t{3}}, 15)->version, 10u);
  EXPECT_EQ(back->Get({int64_t{3}}, 25)->version, 20u);

  for (size_t pos : {size_t{0}, size_t{5}, bytes.size() / 2, bytes.size() - 1}) {
    auto bad = bytes;
    bad[pos] ^= 0x40;
    EXPECT_ERROR_CODE(RowSSTable::Parse(4, SSTableLevel::kMinor, bad, schema), ErrorCode::kCorruption);
  }
  bytes.resize(10);
  EXPECT_ERROR_CODE(RowSSTable::Parse(4, SSTableLevel::kMinor, bytes, schema), ErrorCode::kCorruption);
  std::vector<Row> unordered = {MakeRow(2, 1), MakeRow(1, 1)};
  EXPECT_ERROR_CODE(RowSSTable::Build(1, SSTableLevel::kMinor, unordered), ErrorCode::kInvalidArgument);
}

TEST(RowSSTable, SchemaArityChecked) {
  auto t = RowSSTable::Build(1, SSTableLevel::kMinor, {MakeRow(1, 1)});
  auto bytes = t->Serialize(Kv());
  auto other = Kv();
  other.columns.pop_back();
  EXPECT_ERROR_CODE(RowSSTable::Parse(1, SSTableLevel::kMinor, bytes, other), ErrorCode::kSchemaMismatch);
}

TEST(VerticalSplit, GroupsRespectBudget) {
  std::vector<size_t> cols(37);
  for (size_t i = 0; i < cols.size(); ++i) cols[i] = i;
  auto plan = VerticalSplitPlan(cols, 16);
  std::vector<size_t> flat;
  for (const auto& g : plan) {
    EXPECT_LE(g.size(), 16u);
    EXPECT_FALSE(g.empty());
    flat.insert(flat.end(), g.begin(), g.end());
  }
  EXPECT_EQ(flat, cols);
}

TEST(ColumnBaseline, BuildLoadAndLookup) {
  auto schema = Kv();
  std::vector<Tuple> rows;
  for (int64_t k = 0; k < 3000; ++k) {
    rows.push_back({k, k % 7 == 0 ? Value{} : Value{k * 0.5}, std::string("name-") + std::to_string(k % 40)});
  }
  BaselineOptions opts;
  opts.block_target_bytes = 1024;
  opts.split_budget = 2;
  auto b = ColumnBaseline::Build(schema, rows, opts);
  EXPECT_GT(b->block_count(), 10u);
  EXPECT_EQ(b->groups().size(), 2u);
  auto files = b->SerializeGroups();
  auto loaded = ColumnBaseline::Load(schema, files);
  for (size_t i = 0; i < rows.size(); i += 97) {
    auto ord = loaded->FindPk({int64_t(i)});
    ASSERT_TRUE(ord);
    EXPECT_EQ(loaded->ReadRow(*ord), rows[i]);
  }
  EXPECT_FALSE(loaded->FindPk({int64_t{-1}}));
  size_t total = 0;
  for (size_t blk = 0; blk < loaded->block_count(); ++blk) total += loaded->ReadBlockRows(blk).size();
  EXPECT_EQ(total, rows.size());
  files[0][files[0].size() / 2] ^= 1;
  EXPECT_ERROR_CODE(ColumnBaseline::Load(schema, files), ErrorCode::kCorruption);
}

TEST(Tablet, DmlErrors) {
  Tablet t(Kv());
  t.Insert({int64_t{1}, 1.0, std::string("a")});
  EXPECT_ERROR_CODE(t.Insert({int64_t{1}, 2.0, Value{}}), ErrorCode::kDuplicateKey);
  EXPECT_ERROR_CODE(t.Insert({Value{}, 2.0, Value{}}), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(t.Insert({int64_t{2}, std::string("x"), Value{}}), ErrorCode::kTypeMismatch);
  EXPECT_ERROR_CODE(t.Insert({int64_t{2}, 1.0}), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(t.Insert({int64_t{2}, std::nan(""), Value{}}), ErrorCode::kInvalidArgument);
  std::vector<std::pair<size_t, Value>> a = {{1, 3.0}};
  EXPECT_ERROR_CODE(t.Update({int64_t{9}}, a), ErrorCode::kKeyNotFound);
  EXPECT_ERROR_CODE(t.Delete({int64_t{9}}), ErrorCode::kKeyNotFound);
  t.Insert({int64_t{2}, Value{}, Value{}});
  std::vector<std::pair<size_t, Value>> collide = {{0, int64_t{1}}};
  EXPECT_ERROR_CODE(t.Update({int64_t{2}}, collide), ErrorCode::kDuplicateKey);
  t.MinorCompact();
  EXPECT_ERROR_CODE(t.MinorCompact(), ErrorCode::kEmptyMemtable);
  t.MajorCompact();
  EXPECT_ERROR_CODE(t.MajorCompact(), ErrorCode::kNothingToCompact);
}

TEST(Tablet, NegativeZeroIsCanonical) {
  Tablet t(Kv());
  t.Insert({int64_t{1}, -0.0, Value{}});
  auto row = t.Lookup({int64_t{1}});
  ASSERT_TRUE(row);
  EXPECT_FALSE(std::signbit(std::get<double>((*row)[1])));
}

TEST(Tablet, SnapshotIsolationAcrossCompaction) {
  Tablet t(Kv(), testing::SmallTabletOptions());
  for (int64_t k = 0; k < 100; ++k) t.Insert({k, 1.0, Value{}});
  auto before = t.TakeSnapshot();
  auto rows_before = MergeScan(before);
  for (int64_t k = 0; k < 100; k += 2) t.Delete({k});
  t.MinorCompact();
  t.MajorCompact();
  EXPECT_EQ(MergeScan(before), rows_before);
  EXPECT_EQ(MergeScan(t.TakeSnapshot()).size(), 50u);
  EXPECT_GT(t.generation(), before.state->generation);
}

TEST(Tablet, RandomHistoryMatchesOracle) {
  Rng rng(30);
  for (int h = 0; h < 12; ++h) {
    auto mode = static_cast<StoreMode>(h % 3);
    auto schema = testing::RandomSchema(rng, "t", mode);
    Tablet t(schema, testing::SmallTabletOptions());
    OracleTable oracle(schema);
    for (int i = 0; i < 400; ++i) {
      auto op = testing::RandomOp(rng, oracle, 60);
      auto why = testing::ApplyBoth(t, oracle, op);
      ASSERT_EQ(why, "");
      if (rng.Chance(0.02)) {
        try {
          rng.Chance(0.5) ? t.MinorCompact() : t.MajorCompact();
        } catch (const Error& e) {
          ASSERT_TRUE(e.code() == ErrorCode::kEmptyMemtable || e.code() == ErrorCode::kNothingToCompact);
        }
      }
    }
    std::string why;
    ASSERT_TRUE(testing::SameRows(MergeScan(t.TakeSnapshot()), oracle.Rows(), &why)) << why;
    for (const auto& k : oracle.Keys()) ASSERT_TRUE(t.Lookup(k));
  }
}

TEST(Tablet, ReopenFromDirectory) {
  auto dir = std::filesystem::temp_directory_path() / "mercury_tablet_test";
  std::filesystem::remove_all(dir);
  std::vector<Tuple> expected;
  uint64_t generation = 0;
  {
    auto t = Tablet::Open(Kv(StoreMode::kRedundant), testing::SmallTabletOptions(), dir.string());
    for (int64_t k = 0; k < 300; ++k) t->Insert({k, k * 0.25, std::string(k % 5, 'q')});
    t->MajorCompact();
    for (int64_t k = 0; k < 300; k += 3) t->Delete({k});
    t->MinorCompact();
    t->Insert({int64_t{1000}, Value{}, Value{}});
    t->Flush();
    expected = MergeScan(t->TakeSnapshot());
    generation = t->generation();
  }
  auto t = Tablet::Open(Kv(StoreMode::kRedundant), testing::SmallTabletOptions(), dir.string());
  EXPECT_EQ(MergeScan(t->TakeSnapshot()), expected);
  EXPECT_GE(t->generation(), generation);
  t->Insert({int64_t{2000}, 1.0, Value{}});
  EXPECT_EQ(MergeScan(t->TakeSnapshot()).size(), expected.size() + 1);
  std::filesystem::remove_all(dir);
}

TEST(Tablet, DirtyBlocksFollowIncremental) {
  TabletOptions opts = testing::SmallTabletOptions();
  Tablet t(Kv(), opts);
  for (int64_t k = 0; k < 2000; ++k) t.Insert({k, 0.5, std::string("abc")});
  t.MajorCompact();
  t.Delete({int64_t{5}});
  auto snap = t.TakeSnapshot();
  auto inc = CollectIncremental(snap, PkRange::All());
  ASSERT_EQ(inc.size(), 1u);
  auto dirty = DirtyBlocks(*snap.state->column_baseline, inc);
  size_t count = 0;
  for (bool d : dirty) count += d;
  EXPECT_EQ(count, 1u);
  EXPECT_TRUE(dirty[0]);
}

}  // namespace
}  // namespace mercury
