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

#include "mercury/storage/tablet.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <limits>
#include <set>

#include "mercury/common/error.h"
#include "mercury/common/file_io.h"

namespace mercury {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr uint64_t kLatest = std::numeric_limits<uint64_t>::max();
constexpr const char* kManifest = "MANIFEST.json";

std::string MinorFile(uint64_t id) { return "minor_" + std::to_string(id) + ".sst"; }
std::string ColumnFile(uint64_t id, size_t group) {
  return "major_" + std::to_string(id) + "_g" + std::to_string(group) + ".sst";
}
std::string RowBaselineFile(uint64_t id) { return "major_" + std::to_string(id) + "_row.sst"; }

Tuple Project(const Tuple& values, std::span<const size_t> projection) {
  if (projection.empty()) return values;
  Tuple out;
  out.reserve(projection.size());
  for (size_t c : projection) out.push_back(values[c]);
  return out;
}

}  // namespace

std::vector<Row> CollectIncremental(const Snapshot& snapshot, const PkRange& range) {
  const TabletState& st = *snapshot.state;
  std::vector<Row> all;
  // Gathered newest source first so a stable sort keeps the newest image first.
  st.memtable->CollectVisible(snapshot.read_version, range, &all);
  for (auto it = st.minors.rbegin(); it != st.minors.rend(); ++it) {
    (*it)->CollectVisible(snapshot.read_version, range, &all);
  }
  std::stable_sort(all.begin(), all.end(), [](const Row& a, const Row& b) {
    int c = CompareTuples(a.pk, b.pk);
    return c != 0 ? c < 0 : a.version > b.version;
  });
  std::vector<Row> out;
  out.reserve(all.size());
  for (auto& r : all) {
    if (out.empty() || CompareTuples(out.back().pk, r.pk) != 0) out.push_back(std::move(r));
  }
  return out;
}

std::vector<bool> DirtyBlocks(const ColumnBaseline& baseline, std::span<const Row> incremental) {
  std::vector<bool> dirty(baseline.block_count(), false);
  for (size_t b = 0; b < baseline.block_count(); ++b) {
    const auto& blk = baseline.blocks()[b];
    auto it = std::lower_bound(incremental.begin(), incremental.end(), blk.first_pk,
                               [](const Row& r, const Tuple& k) { return CompareTuples(r.pk, k) < 0; });
    dirty[b] = it != incremental.end() && CompareTuples(it->pk, blk.last_pk) <= 0;
  }
  return dirty;
}

void MergeScan(const Snapshot& snapshot, const PkRange& range, std::span<const size_t> projection,
               const RowSink& sink) {
  const TabletState& st = *snapshot.state;
  auto inc = CollectIncremental(snapshot, range);
  auto pk_idx = snapshot.schema->PkIndices();
  size_t next_inc = 0;

  auto emit_incremental_below = [&](const Tuple* pk) {
    while (next_inc < inc.size() && (!pk || CompareTuples(inc[next_inc].pk, *pk) < 0)) {
      if (!inc[next_inc].tombstone) sink(Project(inc[next_inc].values, projection));
      ++next_inc;
    }
  };
  // Returns true when the baseline image is shadowed by an incremental one.
  auto merge_baseline = [&](const Tuple& pk, const Tuple& values) {
    emit_incremental_below(&pk);
    if (next_inc < inc.size() && CompareTuples(inc[next_inc].pk, pk) == 0) {
      if (!inc[next_inc].tombstone) sink(Project(inc[next_inc].values, projection));
      ++next_inc;
      return;
    }
    sink(Project(values, projection));
  };

  if (st.column_baseline) {
    const auto& base = *st.column_baseline;
    for (size_t b = 0; b < base.block_count(); ++b) {
      const auto& blk = base.blocks()[b];
      if (!range.Overlaps(blk.first_pk, blk.last_pk)) continue;
      for (auto& row : base.ReadBlockRows(b)) {
        Tuple pk;
        for (size_t k : pk_idx) pk.push_back(row[k]);
        if (!range.Contains(pk)) continue;
        merge_baseline(pk, row);
      }
    }
  } else if (st.row_baseline) {
    for (const auto& row : st.row_baseline->rows()) {
      if (!range.Contains(row.pk)) continue;
      merge_baseline(row.pk, row.values);
    }
  }
  emit_incremental_below(nullptr);
}

std::vector<Tuple> MergeScan(const Snapshot& snapshot, const PkRange& range, std::span<const size_t> projection) {
  std::vector<Tuple> out;
  MergeScan(snapshot, range, projection, [&](const Tuple& t) { out.push_back(t); });
  return out;
}

Tablet::Tablet(TableSchema schema, TabletOptions options, std::string dir)
    : schema_(std::make_shared<const TableSchema>(std::move(schema))),
      pk_idx_(schema_->PkIndices()),
      options_(std::move(options)),
      dir_(std::move(dir)) {
  auto st = std::make_shared<TabletState>();
  st->memtable = std::make_shared<MemTable>();
  state_ = st;
}

std::unique_ptr<Tablet> Tablet::Open(TableSchema schema, TabletOptions options, std::string dir) {
  auto t = std::make_unique<Tablet>(std::move(schema), std::move(options), dir);
  if (dir.empty()) return t;
  fs::create_directories(dir);
  fs::path manifest = fs::path(dir) / kManifest;
  if (!fs::exists(manifest)) {
    t->WriteManifest(*t->state_);
    return t;
  }
  json m;
  try {
    m = json::parse(ReadFileText(manifest.string()));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruption, "manifest " + manifest.string() + ": " + e.what());
  }
  auto st = std::make_shared<TabletState>();
  st->memtable = std::make_shared<MemTable>();
  try {
    t->committed_version_ = m.at("last_version").get<uint64_t>();
    t->next_sstable_id_ = m.at("next_sstable_id").get<uint64_t>();
    st->generation = m.at("generation").get<uint64_t>();
    st->baseline_version = m.at("baseline_version").get<uint64_t>();
    st->baseline_id = m.at("baseline_id").get<uint64_t>();
    std::vector<std::vector<uint8_t>> column_files;
    for (const auto& f : m.at("column_files")) column_files.push_back(ReadFileBytes((fs::path(dir) / f.get<std::string>()).string()));
    if (!column_files.empty()) st->column_baseline = ColumnBaseline::Load(*t->schema_, column_files);
    if (m.contains("row_file") && !m.at("row_file").is_null()) {
      auto bytes = ReadFileBytes((fs::path(dir) / m.at("row_file").get<std::string>()).string());
      st->row_baseline = RowSSTable::Parse(st->baseline_id, SSTableLevel::kMajor, bytes, *t->schema_);
    }
    for (const auto& entry : m.at("minors")) {
      uint64_t id = entry.at("id").get<uint64_t>();
      auto bytes = ReadFileBytes((fs::path(dir) / entry.at("file").get<std::string>()).string());
      st->minors.push_back(RowSSTable::Parse(id, SSTableLevel::kMinor, bytes, *t->schema_));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruption, "manifest " + manifest.string() + ": " + e.what());
  }
  t->state_ = st;
  return t;
}

void Tablet::WriteManifest(const TabletState& st) {
  if (dir_.empty()) return;
  json m;
  m["format_version"] = 1;
  m["table"] = schema_->name;
  m["last_version"] = committed_version_;
  m["next_sstable_id"] = next_sstable_id_;
  m["generation"] = st.generation;
  m["baseline_version"] = st.baseline_version;
  m["baseline_id"] = st.baseline_id;
  json cols = json::array();
  if (st.column_baseline) {
    for (size_t g = 0; g < st.column_baseline->groups().size(); ++g) cols.push_back(ColumnFile(st.baseline_id, g));
  }
  m["column_files"] = cols;
  m["row_file"] = st.row_baseline ? json(RowBaselineFile(st.baseline_id)) : json(nullptr);
  json minors = json::array();
  for (const auto& mi : st.minors) minors.push_back({{"id", mi->meta().id}, {"file", MinorFile(mi->meta().id)}});
  m["minors"] = minors;
  WriteFileAtomic((fs::path(dir_) / kManifest).string(), m.dump(2) + "\n");
}

void Tablet::RemoveObsoleteFiles(const TabletState& st) {
  if (dir_.empty()) return;
  std::set<std::string> live{kManifest};
  if (st.column_baseline) {
    for (size_t g = 0; g < st.column_baseline->groups().size(); ++g) live.insert(ColumnFile(st.baseline_id, g));
  }
  if (st.row_baseline) live.insert(RowBaselineFile(st.baseline_id));
  for (const auto& mi : st.minors) live.insert(MinorFile(mi->meta().id));
  for (const auto& entry : fs::directory_iterator(dir_)) {
    std::string name = entry.path().filename().string();
    if (entry.path().extension() == ".sst" && !live.count(name)) fs::remove(entry.path());
  }
}

std::shared_ptr<const TabletState> Tablet::CurrentState() const {
  std::lock_guard lock(state_mu_);
  return state_;
}

void Tablet::Publish(std::shared_ptr<const TabletState> state) {
  std::lock_guard lock(state_mu_);
  state_ = std::move(state);
}

Snapshot Tablet::TakeSnapshot() const {
  std::lock_guard lock(state_mu_);
  return Snapshot{committed_version_, schema_, state_};
}

uint64_t Tablet::last_version() const {
  std::lock_guard lock(state_mu_);
  return committed_version_;
}

uint64_t Tablet::generation() const { return CurrentState()->generation; }

void Tablet::AddListener(DmlListener* listener) {
  std::lock_guard lock(write_mu_);
  if (std::find(listeners_.begin(), listeners_.end(), listener) == listeners_.end()) listeners_.push_back(listener);
}

void Tablet::RemoveListener(DmlListener* listener) {
  std::lock_guard lock(write_mu_);
  listeners_.erase(std::remove(listeners_.begin(), listeners_.end(), listener), listeners_.end());
}

Tuple Tablet::PkOf(const Tuple& values) const {
  Tuple pk;
  pk.reserve(pk_idx_.size());
  for (size_t k : pk_idx_) pk.push_back(values[k]);
  return pk;
}

void Tablet::CheckRow(const Tuple& values) const {
  const auto& cols = schema_->columns;
  if (values.size() != cols.size()) {
    throw Error(ErrorCode::kInvalidArgument, "row has " + std::to_string(values.size()) + " values, table " +
                                                 schema_->name + " has " + std::to_string(cols.size()) + " columns");
  }
  for (size_t c = 0; c < cols.size(); ++c) {
    if (IsNull(values[c])) {
      if (!cols[c].nullable) throw Error(ErrorCode::kInvalidArgument, "column " + cols[c].name + " is not nullable");
    } else if (!ValueHasType(values[c], cols[c].type)) {
      throw Error(ErrorCode::kTypeMismatch, "value " + ValueToString(values[c]) + " for " +
                                                std::string(DataTypeName(cols[c].type)) + " column " + cols[c].name);
    } else if (const auto* d = std::get_if<double>(&values[c]); d && std::isnan(*d)) {
      throw Error(ErrorCode::kInvalidArgument, "NaN is not storable in column " + cols[c].name);
    }
  }
}

std::optional<Tuple> Tablet::Lookup(const Tuple& pk) const { return LookupLocked(pk); }

std::optional<Tuple> Tablet::LookupLocked(const Tuple& pk) const {
  auto st = CurrentState();
  auto image = [](const Row& r) { return r.tombstone ? std::nullopt : std::optional<Tuple>(r.values); };
  if (auto r = st->memtable->Get(pk, kLatest)) return image(*r);
  for (auto it = st->minors.rbegin(); it != st->minors.rend(); ++it) {
    if (auto r = (*it)->Get(pk, kLatest)) return image(*r);
  }
  if (st->column_baseline) {
    if (auto ord = st->column_baseline->FindPk(pk)) return st->column_baseline->ReadRow(*ord);
  } else if (st->row_baseline) {
    if (auto r = st->row_baseline->Get(pk, kLatest)) return image(*r);
  }
  return std::nullopt;
}

uint64_t Tablet::Commit(std::vector<Row> rows, CommitRecord record) {
  uint64_t version;
  {
    std::lock_guard lock(state_mu_);
    version = committed_version_ + 1;
  }
  auto st = CurrentState();
  for (auto& r : rows) {
    r.version = version;
    st->memtable->Put(std::move(r));
  }
  record.version = version;
  for (auto* l : listeners_) l->OnCommit(record);
  {
    std::lock_guard lock(state_mu_);
    committed_version_ = version;
  }
  if (st->memtable->byte_size() >= options_.memtable_freeze_bytes) MinorCompactLocked();
  return version;
}

namespace {

// -0.0 is stored as 0.0 so value equality and byte equality agree.
void CanonicalizeZeros(Tuple* values) {
  for (auto& v : *values) {
    if (auto* d = std::get_if<double>(&v); d && *d == 0) *d = 0.0;
  }
}

}  // namespace

uint64_t Tablet::Insert(Tuple values) {
  std::lock_guard lock(write_mu_);
  CheckRow(values);
  CanonicalizeZeros(&values);
  Tuple pk = PkOf(values);
  if (LookupLocked(pk)) throw Error(ErrorCode::kDuplicateKey, "pk " + TupleToString(pk) + " already exists");
  CommitRecord rec;
  rec.type = DmlType::kInsert;
  rec.new_values = values;
  std::vector<Row> rows;
  rows.push_back(Row{std::move(pk), std::move(values), 0, false});
  return Commit(std::move(rows), std::move(rec));
}

uint64_t Tablet::Update(const Tuple& pk, std::span<const std::pair<size_t, Value>> assignments) {
  std::lock_guard lock(write_mu_);
  auto old = LookupLocked(pk);
  if (!old) throw Error(ErrorCode::kKeyNotFound, "pk " + TupleToString(pk) + " not found");
  Tuple values = *old;
  for (const auto& [col, v] : assignments) {
    if (col >= values.size()) throw Error(ErrorCode::kInvalidArgument, "assignment to unknown column");
    values[col] = v;
  }
  CheckRow(values);
  CanonicalizeZeros(&values);
  Tuple new_pk = PkOf(values);
  std::vector<Row> rows;
  if (CompareTuples(new_pk, pk) != 0) {
    if (LookupLocked(new_pk)) throw Error(ErrorCode::kDuplicateKey, "pk " + TupleToString(new_pk) + " already exists");
    Tuple dead(values.size());
    for (size_t i = 0; i < pk_idx_.size(); ++i) dead[pk_idx_[i]] = pk[i];
    rows.push_back(Row{pk, std::move(dead), 0, true});
  }
  CommitRecord rec;
  rec.type = DmlType::kUpdate;
  rec.old_values = std::move(old);
  rec.new_values = values;
  rows.push_back(Row{std::move(new_pk), std::move(values), 0, false});
  return Commit(std::move(rows), std::move(rec));
}

uint64_t Tablet::Delete(const Tuple& pk) {
  std::lock_guard lock(write_mu_);
  auto old = LookupLocked(pk);
  if (!old) throw Error(ErrorCode::kKeyNotFound, "pk " + TupleToString(pk) + " not found");
  Tuple dead(old->size());
  for (size_t i = 0; i < pk_idx_.size(); ++i) dead[pk_idx_[i]] = pk[i];
  CommitRecord rec;
  rec.type = DmlType::kDelete;
  rec.old_values = std::move(old);
  std::vector<Row> rows;
  rows.push_back(Row{pk, std::move(dead), 0, true});
  return Commit(std::move(rows), std::move(rec));
}

uint64_t Tablet::MinorCompact() {
  std::lock_guard lock(write_mu_);
  return MinorCompactLocked();
}

void Tablet::Flush() {
  std::lock_guard lock(write_mu_);
  if (!CurrentState()->memtable->empty()) MinorCompactLocked();
}

uint64_t Tablet::MinorCompactLocked() {
  auto cur = CurrentState();
  if (cur->memtable->empty()) throw Error(ErrorCode::kEmptyMemtable, "memtable of " + schema_->name + " is empty");
  uint64_t id = next_sstable_id_++;
  auto minor = RowSSTable::Build(id, SSTableLevel::kMinor, cur->memtable->AllVersions());
  auto next = std::make_shared<TabletState>(*cur);
  next->minors.push_back(minor);
  next->memtable = std::make_shared<MemTable>();
  if (!dir_.empty()) {
    WriteFileAtomic((fs::path(dir_) / MinorFile(id)).string(), minor->Serialize(*schema_));
    WriteManifest(*next);
  }
  Publish(std::move(next));
  return id;
}

uint64_t Tablet::MajorCompact() {
  std::lock_guard lock(write_mu_);
  auto cur = CurrentState();
  if (cur->minors.empty() && cur->memtable->empty()) {
    throw Error(ErrorCode::kNothingToCompact, "no incremental data in " + schema_->name);
  }
  Snapshot snap = TakeSnapshot();
  std::vector<Tuple> rows = MergeScan(snap);

  auto next = std::make_shared<TabletState>();
  next->generation = cur->generation + 1;
  next->baseline_version = snap.read_version;
  next->baseline_id = next_sstable_id_++;
  next->memtable = std::make_shared<MemTable>();
  if (schema_->HasColumnBaseline()) next->column_baseline = ColumnBaseline::Build(*schema_, rows, options_.baseline);
  if (schema_->HasRowBaseline()) {
    std::vector<Row> images;
    images.reserve(rows.size());
    for (auto& r : rows) {
      Tuple pk = PkOf(r);
      images.push_back(Row{std::move(pk), std::move(r), snap.read_version, false});
    }
    next->row_baseline = RowSSTable::Build(next->baseline_id, SSTableLevel::kMajor, std::move(images));
  }
  if (!dir_.empty()) {
    if (next->column_baseline) {
      auto files = next->column_baseline->SerializeGroups();
      for (size_t g = 0; g < files.size(); ++g) {
        WriteFileAtomic((fs::path(dir_) / ColumnFile(next->baseline_id, g)).string(), files[g]);
      }
    }
    if (next->row_baseline) {
      WriteFileAtomic((fs::path(dir_) / RowBaselineFile(next->baseline_id)).string(),
                      next->row_baseline->Serialize(*schema_));
    }
    WriteManifest(*next);
    RemoveObsoleteFiles(*next);
  }
  Publish(next);
  return next->baseline_version;
}

}  // namespace mercury
