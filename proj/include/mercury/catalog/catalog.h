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

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "mercury/catalog/schema.h"

namespace mercury {

struct CatalogState {
  std::map<std::string, TableSchema> tables;
  std::map<std::string, MViewDef> mviews;
  std::set<std::string> mlog_tables;
  std::map<std::string, uint64_t> generations;
};

// Registry of table and materialized-view definitions.
//
// Mutations are serialized and publish a fresh immutable CatalogState; readers
// hold a shared_ptr to whichever state was current when they asked.
class Catalog {
 public:
  Catalog() : state_(std::make_shared<CatalogState>()) {}

  std::shared_ptr<const CatalogState> Snapshot() const;

  void AddTable(const TableSchema& schema);
  void DropTable(const std::string& name);
  void AddMView(const MViewDef& def);
  void DropMView(const std::string& name);
  // Idempotent.
  void EnableMlog(const std::string& table);
  void SetGeneration(const std::string& table, uint64_t generation);

  TableSchema GetTable(const std::string& name) const;
  MViewDef GetMView(const std::string& name) const;
  bool HasTable(const std::string& name) const;
  bool HasMView(const std::string& name) const;
  bool MlogEnabled(const std::string& table) const;
  uint64_t Generation(const std::string& table) const;
  std::vector<MViewDef> DependentMViews(const std::string& table) const;

  // One JSON document per table / view under `dir`.
  void Save(const std::filesystem::path& dir) const;
  void Load(const std::filesystem::path& dir);

 private:
  template <typename Fn>
  void Mutate(Fn&& fn);

  mutable std::mutex mu_;
  std::shared_ptr<const CatalogState> state_;
};

std::string TableSchemaToJson(const TableSchema& schema);
TableSchema TableSchemaFromJson(const std::string& text);
std::string MViewDefToJson(const MViewDef& def);
MViewDef MViewDefFromJson(const std::string& text);

}  // namespace mercury
