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

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "mercury/catalog/catalog.h"
#include "mercury/mview/mlog.h"
#include "mercury/mview/mview.h"
#include "mercury/storage/tablet.h"

namespace mercury {

struct DatabaseOptions {
  TabletOptions tablet;
};

// Catalog plus the storage, mlogs and views it describes.
//
// On-disk layout under the data directory:
//   LOCK                         held with flock while open
//   catalog/                     one JSON document per table / view / mlog
//   tables/<name>/               MANIFEST.json, *.sst, mlog.json
//   mviews/<name>/               container.sst, state.json
class Database {
 public:
  static std::unique_ptr<Database> OpenInMemory(DatabaseOptions options = {});
  // kLocked when another process holds the directory.
  static std::unique_ptr<Database> Open(const std::string& dir, DatabaseOptions options = {});
  ~Database();

  Database(const Database&) = delete;
  Database& operator=(const Database&) = delete;

  // Flushes memtables and saves mlogs and the catalog. Called by the destructor.
  void Close();

  Tablet& CreateTable(const TableSchema& schema);
  void DropTable(const std::string& name);
  void EnableMlog(const std::string& table);
  // Registers the view and populates it with one full refresh.
  MaterializedView& CreateMView(const MViewDef& def);
  void DropMView(const std::string& name);

  Tablet& table(const std::string& name);
  MaterializedView& mview(const std::string& name);
  // Null when the table has no mlog.
  MLog* mlog(const std::string& table);
  Catalog& catalog() { return catalog_; }

  uint64_t CompactMinor(const std::string& table);
  uint64_t CompactMajor(const std::string& table);
  // Uses the view's refresh policy unless `mode` is given.
  RefreshReport Refresh(const std::string& mv, std::optional<RefreshPolicy> mode = std::nullopt);
  // Removes mlog entries every dependent incremental view has applied.
  size_t PurgeMlog(const std::string& table);
  // JSON description of a table's storage state.
  std::string TableStats(const std::string& table);

  const std::string& dir() const { return dir_; }

 private:
  explicit Database(DatabaseOptions options, std::string dir);
  void LoadAll();
  void SaveCatalog();
  std::string TableDir(const std::string& table) const;
  std::string MViewDir(const std::string& mv) const;

  DatabaseOptions options_;
  std::string dir_;
  int lock_fd_ = -1;
  bool closed_ = false;
  Catalog catalog_;
  std::map<std::string, std::unique_ptr<Tablet>> tables_;
  std::map<std::string, std::unique_ptr<MLog>> mlogs_;
  std::map<std::string, std::unique_ptr<MaterializedView>> mviews_;
};

}  // namespace mercury
