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

#include <filesystem>

#include "expect_error.h"
#include "mercury/catalog/catalog.h"

namespace mercury {
namespace {

TableSchema T1() {
  TableSchema s;
  s.name = "t1";
  s.columns = {{"c1", DataType::kInt64, false}, {"c2", DataType::kInt64, true}, {"s", DataType::kUtf8, true}};
  s.pk = {"c1"};
  return s;
}

MViewDef M1(RefreshPolicy policy = RefreshPolicy::kIncremental) {
  MViewDef d;
  d.name = "m1";
  d.base_table = "t1";
  d.refresh_policy = policy;
  d.select_items = {{AggFunc::kCountCol, "c1", "cnt"}};
  return d;
}

TEST(Schema, Validation) {
  ValidateSchema(T1());
  auto s = T1();
  s.pk = {};
  EXPECT_ERROR_CODE(ValidateSchema(s), ErrorCode::kInvalidSchema);
  s = T1();
  s.columns[0].nullable = true;
  EXPECT_ERROR_CODE(ValidateSchema(s), ErrorCode::kInvalidSchema);
  s = T1();
  s.columns.push_back({"c2", DataType::kInt64, true});
  EXPECT_ERROR_CODE(ValidateSchema(s), ErrorCode::kInvalidSchema);
  s = T1();
  s.pk = {"nope"};
  EXPECT_ERROR_CODE(ValidateSchema(s), ErrorCode::kInvalidSchema);
  s = T1();
  s.name = "bad name";
  EXPECT_ERROR_CODE(ValidateSchema(s), ErrorCode::kInvalidSchema);
}

TEST(Schema, StoreModeNames) {
  for (auto m : {StoreMode::kRow, StoreMode::kColumn, StoreMode::kRedundant}) {
    EXPECT_EQ(ParseStoreMode(StoreModeName(m)), m);
  }
  EXPECT_FALSE(ParseStoreMode("hybrid"));
}

TEST(Schema, MViewValidation) {
  ValidateMView(M1(), T1());
  auto d = M1();
  d.kind = "Join-MAV";
  EXPECT_ERROR_CODE(ValidateMView(d, T1()), ErrorCode::kUnsupported);
  d = M1();
  d.select_items = {{AggFunc::kSum, "s", "x"}};
  EXPECT_ERROR_CODE(ValidateMView(d, T1()), ErrorCode::kTypeMismatch);
  d = M1();
  d.select_items.push_back({AggFunc::kCountStar, "c1", "n"});
  EXPECT_ERROR_CODE(ValidateMView(d, T1()), ErrorCode::kInvalidSchema);
  d = M1();
  d.group_by = {"zz"};
  EXPECT_ERROR_CODE(ValidateMView(d, T1()), ErrorCode::kInvalidSchema);
}

TEST(Schema, OutputColumns) {
  auto d = M1();
  d.group_by = {"s"};
  d.select_items.push_back({AggFunc::kAvg, "c2", "a"});
  auto cols = MViewOutputColumns(d, T1());
  ASSERT_EQ(cols.size(), 3u);
  EXPECT_EQ(cols[0].type, DataType::kUtf8);
  EXPECT_EQ(cols[1].type, DataType::kInt64);
  EXPECT_FALSE(cols[1].nullable);
  EXPECT_EQ(cols[2].type, DataType::kFloat64);
}

TEST(Catalog, AddDropAndDependencies) {
  Catalog c;
  c.AddTable(T1());
  EXPECT_ERROR_CODE(c.AddTable(T1()), ErrorCode::kDuplicateName);
  EXPECT_ERROR_CODE(c.AddMView(M1()), ErrorCode::kMissingMlog);
  c.AddMView(M1(RefreshPolicy::kFull));
  EXPECT_ERROR_CODE(c.DropTable("t1"), ErrorCode::kDependentViews);
  EXPECT_EQ(c.DependentMViews("t1").size(), 1u);
  c.DropMView("m1");
  EXPECT_ERROR_CODE(c.DropMView("m1"), ErrorCode::kUnknownMView);
  c.EnableMlog("t1");
  c.EnableMlog("t1");
  EXPECT_TRUE(c.MlogEnabled("t1"));
  c.AddMView(M1());
  c.DropMView("m1");
  c.DropTable("t1");
  EXPECT_FALSE(c.HasTable("t1"));
  EXPECT_ERROR_CODE(c.GetTable("t1"), ErrorCode::kUnknownBaseTable);
}

TEST(Catalog, SnapshotsAreImmutable) {
  Catalog c;
  auto before = c.Snapshot();
  c.AddTable(T1());
  EXPECT_TRUE(before->tables.empty());
  EXPECT_EQ(c.Snapshot()->tables.size(), 1u);
}

TEST(Catalog, SaveLoadRoundTrip) {
  auto dir = std::filesystem::temp_directory_path() / "mercury_catalog_test";
  std::filesystem::remove_all(dir);
  Catalog c;
  auto t = T1();
  t.store_mode = StoreMode::kRedundant;
  c.AddTable(t);
  c.EnableMlog("t1");
  auto d = M1();
  d.group_by = {"s"};
  c.AddMView(d);
  c.SetGeneration("t1", 7);
  c.Save(dir);
  Catalog loaded;
  loaded.Load(dir);
  EXPECT_EQ(loaded.GetTable("t1"), t);
  EXPECT_EQ(loaded.GetMView("m1"), d);
  EXPECT_TRUE(loaded.MlogEnabled("t1"));
  // Generations live in the tablet manifests; the catalog starts from zero.
  EXPECT_EQ(loaded.Generation("t1"), 0u);
  std::filesystem::remove_all(dir);
}

TEST(Catalog, JsonRoundTrip) {
  EXPECT_EQ(TableSchemaFromJson(TableSchemaToJson(T1())), T1());
  EXPECT_EQ(MViewDefFromJson(MViewDefToJson(M1())), M1());
  EXPECT_ERROR_CODE(TableSchemaFromJson("{not json"), ErrorCode::kCorruption);
}

}  // namespace
}  // namespace mercury
