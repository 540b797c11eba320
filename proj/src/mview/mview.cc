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

#include "mercury/mview/mview.h"

#include <chrono>
#include <filesystem>
#include <json.hpp>
#include <set>

#include "mercury/common/error.h"
#include "mercury/common/file_io.h"
#include "mercury/scan/scan.h"
#include "mercury/storage/sstable.h"

namespace mercury {

namespace fs = std::filesystem;
using nlohmann::json;

std::string RefreshReport::ToJson() const {
  nlohmann::ordered_json j;
  j["mv"] = mv;
  j["mode"] = RefreshPolicyName(mode);
  j["entries_processed"] = entries_processed;
  j["groups_touched"] = groups_touched;
  j["container_rows"] = container_rows;
  j["duration_ms"] = duration_ms;
  return j.dump();
}

namespace {

std::vector<size_t> GroupColumns(const MViewDef& def, const TableSchema& base) {
  std::vector<size_t> cols;
  for (const auto& g : def.group_by) cols.push_back(base.RequireColumn(g));
  return cols;
}

void AddValue(const BoundAgg& agg, const Tuple& values, AggState* state) {
  if (agg.func == AggFunc::kCountStar) {
    ++state->count;
  } else if (!IsNull(values[*agg.column])) {
    state->Add(values[*agg.column]);
  }
}

double Millis(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

Container ComputeContainer(const MViewDef& def, const TableSchema& base, const Snapshot& snapshot,
                           const std::function<bool(const Tuple&)>& keep) {
  auto aggs = BindAggs(base, def.select_items);
  auto group_cols = GroupColumns(def, base);
  Container c;
  if (group_cols.empty() && (!keep || keep(Tuple{}))) c[Tuple{}].aggs.resize(aggs.size());
  MergeScan(snapshot, PkRange::All(), {}, [&](const Tuple& values) {
    Tuple key;
    for (size_t g : group_cols) key.push_back(values[g]);
    if (keep && !keep(key)) return;
    auto& st = c[key];
    if (st.aggs.empty()) st.aggs.resize(aggs.size());
    ++st.row_count;
    for (size_t a = 0; a < aggs.size(); ++a) AddValue(aggs[a], values, &st.aggs[a]);
  });
  return c;
}

MaterializedView::MaterializedView(MViewDef def, Tablet* base, MLog* mlog, std::string dir)
    : def_(std::move(def)), base_(base), mlog_(mlog), dir_(std::move(dir)) {
  ValidateMView(def_, base_->schema());
  aggs_ = BindAggs(base_->schema(), def_.select_items);
  group_cols_ = GroupColumns(def_, base_->schema());
  if (group_cols_.empty()) container_[Tuple{}] = EmptyState();
}

void MaterializedView::set_mlog(MLog* mlog) {
  std::unique_lock lock(mu_);
  mlog_ = mlog;
}

GroupState MaterializedView::EmptyState() const {
  GroupState s;
  s.aggs.resize(aggs_.size());
  return s;
}

Tuple MaterializedView::KeyOf(const Tuple& values) const {
  Tuple key;
  key.reserve(group_cols_.size());
  for (size_t g : group_cols_) key.push_back(values[g]);
  return key;
}

bool MaterializedView::Apply(const Tuple& values, int sign, GroupState* state) const {
  state->row_count += sign;
  if (sign > 0) {
    for (size_t a = 0; a < aggs_.size(); ++a) AddValue(aggs_[a], values, &state->aggs[a]);
    return true;
  }
  bool exact = true;
  for (size_t a = 0; a < aggs_.size(); ++a) {
    const BoundAgg& agg = aggs_[a];
    AggState& s = state->aggs[a];
    if (agg.func == AggFunc::kCountStar) {
      --s.count;
      continue;
    }
    const Value& v = values[*agg.column];
    if (IsNull(v)) continue;
    --s.count;
    if (const auto* i = std::get_if<int64_t>(&v)) {
      s.int_sum = WrappingSub(s.int_sum, *i);
    } else if (const auto* d = std::get_if<double>(&v)) {
      s.float_sum -= *d;
    }
    // Dirty extremum: removing a value at or beyond the running extremum
    // leaves the new extremum unknown.
    if (agg.func == AggFunc::kMin && (IsNull(s.min) || CompareValues(v, s.min) <= 0)) exact = false;
    if (agg.func == AggFunc::kMax && (IsNull(s.max) || CompareValues(v, s.max) >= 0)) exact = false;
  }
  return exact;
}

RefreshReport MaterializedView::FullRefresh() {
  std::lock_guard refresh(refresh_mu_);
  auto start = std::chrono::steady_clock::now();
  Snapshot snap = base_->TakeSnapshot();
  MLog* mlog;
  {
    std::shared_lock lock(mu_);
    mlog = mlog_;
  }
  uint64_t new_cursor = mlog ? mlog->LastSequenceAt(snap.read_version) : 0;

  // Hidden container: built aside, then swapped in whole.
  RefreshReport report;
  report.mv = def_.name;
  report.mode = RefreshPolicy::kFull;
  Container hidden;
  if (group_cols_.empty()) hidden[Tuple{}] = EmptyState();
  MergeScan(snap, PkRange::All(), {}, [&](const Tuple& values) {
    ++report.entries_processed;
    auto [it, fresh] = hidden.try_emplace(KeyOf(values), EmptyState());
    Apply(values, 1, &it->second);
  });
  report.groups_touched = hidden.size();
  report.container_rows = hidden.size();
  Save(hidden, new_cursor, snap.read_version);
  {
    std::unique_lock lock(mu_);
    container_.swap(hidden);
    cursor_ = new_cursor;
    refreshed_version_ = snap.read_version;
  }
  report.duration_ms = Millis(start);
  return report;
}

RefreshReport MaterializedView::IncrementalRefresh() {
  std::lock_guard refresh(refresh_mu_);
  auto start = std::chrono::steady_clock::now();
  MLog* mlog;
  uint64_t cursor;
  {
    std::shared_lock lock(mu_);
    mlog = mlog_;
    cursor = cursor_;
  }
  if (!mlog) throw Error(ErrorCode::kMissingMlog, "base table " + def_.base_table + " of " + def_.name + " has no mlog");
  Snapshot snap = base_->TakeSnapshot();
  std::vector<MLogEntry> entries = mlog->Read(cursor, snap.read_version);

  RefreshReport report;
  report.mv = def_.name;
  report.mode = RefreshPolicy::kIncremental;
  report.entries_processed = entries.size();

  std::map<Tuple, GroupState, TupleLess> touched;
  std::set<Tuple, TupleLess> dirty;
  {
    std::shared_lock lock(mu_);
    for (const auto& e : entries) {
      Tuple key = KeyOf(e.values);
      auto it = touched.find(key);
      if (it == touched.end()) {
        auto c = container_.find(key);
        it = touched.emplace(key, c == container_.end() ? EmptyState() : c->second).first;
      }
      if (!Apply(e.values, e.old_new == OldNew::kNew ? 1 : -1, &it->second)) dirty.insert(key);
    }
  }
  if (!dirty.empty()) {
    Container fresh = ComputeContainer(def_, base_->schema(), snap, [&](const Tuple& k) { return dirty.count(k) > 0; });
    for (const auto& key : dirty) {
      auto it = fresh.find(key);
      touched[key] = it == fresh.end() ? EmptyState() : it->second;
    }
  }
  report.groups_touched = touched.size();

  uint64_t new_cursor = entries.empty() ? cursor : entries.back().sequence;
  {
    std::unique_lock lock(mu_);
    for (auto& [key, state] : touched) {
      if (state.row_count <= 0 && !group_cols_.empty()) {
        container_.erase(key);
      } else {
        container_[key] = std::move(state);
      }
    }
    cursor_ = new_cursor;
    refreshed_version_ = snap.read_version;
    report.container_rows = container_.size();
    if (!dir_.empty()) Save(container_, cursor_, refreshed_version_);
  }
  report.duration_ms = Millis(start);
  return report;
}

RefreshReport MaterializedView::Refresh(RefreshPolicy mode) {
  return mode == RefreshPolicy::kFull ? FullRefresh() : IncrementalRefresh();
}

std::vector<Tuple> MaterializedView::Finalize(const Container& c) const {
  std::vector<Tuple> rows;
  rows.reserve(c.size());
  for (const auto& [key, state] : c) {
    if (state.row_count <= 0 && !group_cols_.empty()) continue;
    Tuple row = key;
    for (size_t a = 0; a < aggs_.size(); ++a) row.push_back(FinalizeAgg(aggs_[a], state.aggs[a]));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Tuple> MaterializedView::Read() const {
  std::shared_lock lock(mu_);
  return Finalize(container_);
}

std::vector<Tuple> MaterializedView::RealtimeRead(const Snapshot& snapshot) const {
  std::shared_lock lock(mu_);
  if (!mlog_) throw Error(ErrorCode::kUnsupported, "realtime read of " + def_.name + " needs an mlog on its base table");
  std::vector<MLogEntry> entries;
  int direction = 1;
  if (snapshot.read_version >= refreshed_version_) {
    entries = mlog_->Read(cursor_, snapshot.read_version);
  } else {
    // Snapshot predates the container: undo the newer entries, newest first.
    entries = mlog_->ReadVersions(snapshot.read_version, refreshed_version_);
    std::reverse(entries.begin(), entries.end());
    direction = -1;
  }
  Container view = container_;
  std::set<Tuple, TupleLess> dirty;
  for (const auto& e : entries) {
    Tuple key = KeyOf(e.values);
    auto [it, fresh] = view.try_emplace(key, EmptyState());
    int sign = (e.old_new == OldNew::kNew ? 1 : -1) * direction;
    if (!Apply(e.values, sign, &it->second)) dirty.insert(key);
  }
  if (!dirty.empty()) {
    Container fresh = ComputeContainer(def_, base_->schema(), snapshot, [&](const Tuple& k) { return dirty.count(k) > 0; });
    for (const auto& key : dirty) {
      auto it = fresh.find(key);
      view[key] = it == fresh.end() ? EmptyState() : it->second;
    }
  }
  return Finalize(view);
}

uint64_t MaterializedView::cursor() const {
  std::shared_lock lock(mu_);
  return cursor_;
}

uint64_t MaterializedView::refreshed_version() const {
  std::shared_lock lock(mu_);
  return refreshed_version_;
}

size_t MaterializedView::container_rows() const {
  std::shared_lock lock(mu_);
  return container_.size();
}

namespace {

// Physical container layout: group columns, __rows, then per aggregate
// {count, sum, min, max}.
TableSchema ContainerSchema(const MViewDef& def, const TableSchema& base, std::span<const BoundAgg> aggs) {
  TableSchema s;
  s.name = def.name + "$container";
  s.store_mode = StoreMode::kRow;
  for (const auto& g : def.group_by) {
    s.columns.push_back(base.columns[base.RequireColumn(g)]);
    s.pk.push_back(g);
  }
  if (def.group_by.empty()) {
    s.columns.push_back({"__key", DataType::kInt64, false});
    s.pk.push_back("__key");
  }
  s.columns.push_back({"__rows", DataType::kInt64, false});
  for (size_t a = 0; a < aggs.size(); ++a) {
    std::string p = def.select_items[a].output_name + "__";
    DataType in = aggs[a].input_type;
    s.columns.push_back({p + "count", DataType::kInt64, false});
    s.columns.push_back({p + "isum", DataType::kInt64, false});
    s.columns.push_back({p + "fsum", DataType::kFloat64, false});
    s.columns.push_back({p + "min", in, true});
    s.columns.push_back({p + "max", in, true});
  }
  return s;
}

}  // namespace

void MaterializedView::Save(const Container& c, uint64_t cursor, uint64_t version) const {
  if (dir_.empty()) return;
  fs::create_directories(dir_);
  TableSchema cs = ContainerSchema(def_, base_->schema(), aggs_);
  std::vector<Row> rows;
  rows.reserve(c.size());
  for (const auto& [key, state] : c) {
    Row r;
    r.pk = key.empty() ? Tuple{int64_t{0}} : key;
    r.values = r.pk;
    r.values.push_back(state.row_count);
    for (const auto& s : state.aggs) {
      r.values.push_back(s.count);
      r.values.push_back(s.int_sum);
      r.values.push_back(s.float_sum);
      r.values.push_back(s.min);
      r.values.push_back(s.max);
    }
    r.version = version;
    rows.push_back(std::move(r));
  }
  // Bulk load: the container file is written directly, not through DML.
  auto sst = RowSSTable::Build(0, SSTableLevel::kMajor, std::move(rows));
  WriteFileAtomic((fs::path(dir_) / "container.sst").string(), sst->Serialize(cs));
  json state{{"mv", def_.name}, {"cursor", cursor}, {"refreshed_version", version}};
  WriteFileAtomic((fs::path(dir_) / "state.json").string(), state.dump(2) + "\n");
}

bool MaterializedView::Load() {
  if (dir_.empty() || !fs::exists(fs::path(dir_) / "state.json")) return false;
  json state;
  try {
    state = json::parse(ReadFileText((fs::path(dir_) / "state.json").string()));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruption, "state of " + def_.name + ": " + e.what());
  }
  TableSchema cs = ContainerSchema(def_, base_->schema(), aggs_);
  auto sst = RowSSTable::Parse(0, SSTableLevel::kMajor, ReadFileBytes((fs::path(dir_) / "container.sst").string()), cs);
  Container c;
  size_t nkey = group_cols_.empty() ? 1 : group_cols_.size();
  for (const auto& r : sst->rows()) {
    GroupState s;
    size_t i = nkey;
    s.row_count = std::get<int64_t>(r.values[i++]);
    s.aggs.resize(aggs_.size());
    for (auto& a : s.aggs) {
      a.count = std::get<int64_t>(r.values[i++]);
      a.int_sum = std::get<int64_t>(r.values[i++]);
      a.float_sum = std::get<double>(r.values[i++]);
      a.min = r.values[i++];
      a.max = r.values[i++];
    }
    c[group_cols_.empty() ? Tuple{} : r.pk] = std::move(s);
  }
  std::unique_lock lock(mu_);
  container_ = std::move(c);
  if (group_cols_.empty() && container_.empty()) container_[Tuple{}] = EmptyState();
  cursor_ = state.at("cursor").get<uint64_t>();
  refreshed_version_ = state.at("refreshed_version").get<uint64_t>();
  return true;
}

}  // namespace mercury
