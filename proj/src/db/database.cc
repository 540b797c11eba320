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

#include "mercury/db/database.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <filesystem>
#include <json.hpp>
#include <limits>

#include "mercury/common/error.h"
#include "mercury/common/file_io.h"

namespace mercury {

namespace fs = std::filesystem;

Database::Database(DatabaseOptions options, std::string dir) : options_(std::move(options)), dir_(std::move(dir)) {}

std::unique_ptr<Database> Database::OpenInMemory(DatabaseOptions options) {
  return std::unique_ptr<Database>(new Database(std::move(options), ""));
}

std::unique_ptr<Database> Database::Open(const std::string& dir, DatabaseOptions options) {
  std::unique_ptr<Database> db(new Database(std::move(options), dir));
  std::error_code ec;
  fs::create_directories(fs::path(dir) / "catalog", ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir + ": " + ec.message());
  std::string lock_path = (fs::path(dir) / "LOCK").string();
  db->lock_fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (db->lock_fd_ < 0) throw Error(ErrorCode::kIoError, "cannot open " + lock_path);
  if (::flock(db->lock_fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(db->lock_fd_);
    db->lock_fd_ = -1;
    db->closed_ = true;
    throw Error(ErrorCode::kLocked, "data directory " + dir + " is in use by another process");
  }
  db->LoadAll();
  return db;
}

Database::~Database() {
  try {
    Close();
  } catch (...) {
  }
}

std::string Database::TableDir(const std::string& table) const {
  return dir_.empty() ? "" : (fs::path(dir_) / "tables" / table).string();
}

std::string Database::MViewDir(const std::string& mv) const {
  return dir_.empty() ? "" : (fs::path(dir_) / "mviews" / mv).string();
}

void Database::LoadAll() {
  catalog_.Load(fs::path(dir_) / "catalog");
  auto st = catalog_.Snapshot();
  for (const auto& [name, schema] : st->tables) {
    tables_[name] = Tablet::Open(schema, options_.tablet, TableDir(name));
    catalog_.SetGeneration(name, tables_[name]->generation());
  }
  for (const auto& name : st->mlog_tables) {
    auto log = std::make_unique<MLog>(tables_.at(name)->schema_ptr());
    fs::path file = fs::path(TableDir(name)) / "mlog.json";
    if (fs::exists(file)) log->LoadJson(ReadFileText(file.string()));
    tables_.at(name)->AddListener(log.get());
    mlogs_[name] = std::move(log);
  }
  for (const auto& [name, def] : st->mviews) {
    auto mv = std::make_unique<MaterializedView>(def, tables_.at(def.base_table).get(), mlog(def.base_table),
                                                 MViewDir(name));
    if (!mv->Load()) mv->FullRefresh();
    mviews_[name] = std::move(mv);
  }
}

void Database::SaveCatalog() {
  if (!dir_.empty()) catalog_.Save(fs::path(dir_) / "catalog");
}

void Database::Close() {
  if (closed_) return;
  closed_ = true;
  if (!dir_.empty()) {
    for (auto& [name, t] : tables_) t->Flush();
    for (auto& [name, log] : mlogs_) {
      WriteFileAtomic((fs::path(TableDir(name)) / "mlog.json").string(), log->ToJson());
    }
    SaveCatalog();
  }
  if (lock_fd_ >= 0) {
    ::flock(lock_fd_, LOCK_UN);
    ::close(lock_fd_);
    lock_fd_ = -1;
  }
}

Tablet& Database::CreateTable(const TableSchema& schema) {
  ValidateSchema(schema);
  if (catalog_.HasMView(schema.name)) throw Error(ErrorCode::kDuplicateName, "name already in use: " + schema.name);
  catalog_.AddTable(schema);
  auto t = Tablet::Open(schema, options_.tablet, TableDir(schema.name));
  Tablet& ref = *t;
  tables_[schema.name] = std::move(t);
  SaveCatalog();
  return ref;
}

void Database::DropTable(const std::string& name) {
  catalog_.DropTable(name);
  auto it = tables_.find(name);
  if (auto log = mlogs_.find(name); log != mlogs_.end()) {
    it->second->RemoveListener(log->second.get());
    mlogs_.erase(log);
  }
  tables_.erase(it);
  if (!dir_.empty()) fs::remove_all(TableDir(name));
  SaveCatalog();
}

void Database::EnableMlog(const std::string& table) {
  catalog_.EnableMlog(table);
  if (mlogs_.count(table)) return;
  Tablet& t = this->table(table);
  auto log = std::make_unique<MLog>(t.schema_ptr());
  t.AddListener(log.get());
  for (auto& [name, mv] : mviews_) {
    if (mv->def().base_table == table) mv->set_mlog(log.get());
  }
  mlogs_[table] = std::move(log);
  SaveCatalog();
}

MaterializedView& Database::CreateMView(const MViewDef& def) {
  if (!catalog_.HasTable(def.base_table)) throw Error(ErrorCode::kUnknownBaseTable, def.base_table);
  ValidateMView(def, catalog_.GetTable(def.base_table));
  catalog_.AddMView(def);
  std::unique_ptr<MaterializedView> mv;
  try {
    mv = std::make_unique<MaterializedView>(def, tables_.at(def.base_table).get(), mlog(def.base_table),
                                            MViewDir(def.name));
    mv->FullRefresh();
  } catch (...) {
    catalog_.DropMView(def.name);
    throw;
  }
  MaterializedView& ref = *mv;
  mviews_[def.name] = std::move(mv);
  SaveCatalog();
  return ref;
}

void Database::DropMView(const std::string& name) {
  catalog_.DropMView(name);
  mviews_.erase(name);
  if (!dir_.empty()) fs::remove_all(MViewDir(name));
  SaveCatalog();
}

Tablet& Database::table(const std::string& name) {
  auto it = tables_.find(name);
  if (it == tables_.end()) throw Error(ErrorCode::kUnknownBaseTable, "no table named " + name);
  return *it->second;
}

MaterializedView& Database::mview(const std::string& name) {
  auto it = mviews_.find(name);
  if (it == mviews_.end()) throw Error(ErrorCode::kUnknownMView, "no materialized view named " + name);
  return *it->second;
}

MLog* Database::mlog(const std::string& table) {
  auto it = mlogs_.find(table);
  return it == mlogs_.end() ? nullptr : it->second.get();
}

uint64_t Database::CompactMinor(const std::string& name) {
  uint64_t id = table(name).MinorCompact();
  catalog_.SetGeneration(name, table(name).generation());
  return id;
}

uint64_t Database::CompactMajor(const std::string& name) {
  uint64_t version = table(name).MajorCompact();
  catalog_.SetGeneration(name, table(name).generation());
  SaveCatalog();
  return version;
}

RefreshReport Database::Refresh(const std::string& mv, std::optional<RefreshPolicy> mode) {
  MaterializedView& v = mview(mv);
  return v.Refresh(mode.value_or(v.def().refresh_policy));
}

size_t Database::PurgeMlog(const std::string& name) {
  table(name);
  MLog* log = mlog(name);
  if (!log) return 0;
  uint64_t upto = std::numeric_limits<uint64_t>::max();
  bool any = false;
  for (auto& [mv_name, mv] : mviews_) {
    if (mv->def().base_table != name) continue;
    any = true;
    upto = std::min(upto, mv->cursor());
  }
  if (!any) upto = log->last_sequence();
  return log->Purge(upto);
}

std::string Database::TableStats(const std::string& name) {
  Tablet& t = table(name);
  Snapshot s = t.TakeSnapshot();
  const TabletState& st = *s.state;
  nlohmann::ordered_json j;
  j["table"] = name;
  j["store_mode"] = StoreModeName(t.schema().store_mode);
  j["generation"] = st.generation;
  j["last_version"] = s.read_version;
  j["baseline_version"] = st.baseline_version;
  j["baseline_rows"] = st.column_baseline ? st.column_baseline->row_count()
                                          : (st.row_baseline ? st.row_baseline->size() : 0);
  j["baseline_blocks"] = st.column_baseline ? st.column_baseline->block_count() : 0;
  j["baseline_encoded_bytes"] = st.column_baseline ? st.column_baseline->encoded_bytes() : 0;
  if (st.column_baseline) {
    nlohmann::ordered_json enc;
    for (size_t c = 0; c < st.column_baseline->column_count(); ++c) {
      std::map<std::string, uint64_t> counts;
      for (const auto& b : st.column_baseline->segment(c).blocks) ++counts[std::string(EncodingName(b.encoding_id))];
      enc[t.schema().columns[c].name] = counts;
    }
    j["encodings"] = enc;
  }
  nlohmann::ordered_json minors = nlohmann::ordered_json::array();
  for (const auto& m : st.minors) {
    minors.push_back({{"id", m->meta().id},
                      {"records", m->size()},
                      {"min_version", m->meta().min_version},
                      {"max_version", m->meta().max_version}});
  }
  j["minors"] = minors;
  j["memtable_versions"] = st.memtable->version_count();
  j["memtable_bytes"] = st.memtable->byte_size();
  if (MLog* log = mlog(name)) {
    j["mlog_entries"] = log->size();
    j["mlog_purged_upto"] = log->purged_upto();
  }
  return j.dump();
}

}  // namespace mercury
