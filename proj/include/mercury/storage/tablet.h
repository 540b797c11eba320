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

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mercury/catalog/schema.h"
#include "mercury/storage/baseline.h"
#include "mercury/storage/memtable.h"
#include "mercury/storage/sstable.h"

namespace mercury {

struct TabletOptions {
  size_t memtable_freeze_bytes = size_t{4} << 20;
  BaselineOptions baseline;
};

// One immutable generation of a tablet. Readers pin it through a Snapshot.
struct TabletState {
  uint64_t generation = 0;
  uint64_t baseline_version = 0;
  uint64_t baseline_id = 0;
  std::shared_ptr<const ColumnBaseline> column_baseline;
  std::shared_ptr<const RowSSTable> row_baseline;
  std::vector<std::shared_ptr<const RowSSTable>> minors;  // oldest first
  // Only the newest generation's memtable still receives writes; older
  // generations hold frozen ones.
  std::shared_ptr<MemTable> memtable;
};

struct Snapshot {
  uint64_t read_version = 0;
  std::shared_ptr<const TableSchema> schema;
  std::shared_ptr<const TabletState> state;
};

// Newest version ≤ read_version of every pk in `range` across memtable and
// minors, in pk order. Tombstones are kept.
std::vector<Row> CollectIncremental(const Snapshot& snapshot, const PkRange& range);

// Blocks whose pk range contains at least one incremental pk.
std::vector<bool> DirtyBlocks(const ColumnBaseline& baseline, std::span<const Row> incremental);

using RowSink = std::function<void(const Tuple&)>;

// Visible image of every pk in `range`, in pk order, projected onto
// `projection` (all columns when empty).
void MergeScan(const Snapshot& snapshot, const PkRange& range, std::span<const size_t> projection,
               const RowSink& sink);
std::vector<Tuple> MergeScan(const Snapshot& snapshot, const PkRange& range = {},
                             std::span<const size_t> projection = {});

// Single-tablet table: memtable, minor row SSTables and a baseline.
class Tablet {
 public:
  // `dir` empty keeps everything in memory.
  Tablet(TableSchema schema, TabletOptions options = {}, std::string dir = {});
  // Loads MANIFEST.json from `dir` when present.
  static std::unique_ptr<Tablet> Open(TableSchema schema, TabletOptions options, std::string dir);

  Tablet(const Tablet&) = delete;
  Tablet& operator=(const Tablet&) = delete;

  uint64_t Insert(Tuple values);
  // Assignments are (column index, value); assigning a pk column moves the row.
  uint64_t Update(const Tuple& pk, std::span<const std::pair<size_t, Value>> assignments);
  uint64_t Delete(const Tuple& pk);

  Snapshot TakeSnapshot() const;

  // Returns the id of the new minor SSTable.
  uint64_t MinorCompact();
  // Returns the new baseline version.
  uint64_t MajorCompact();
  // Writes a non-empty memtable out as a minor SSTable; no-op otherwise.
  void Flush();

  void AddListener(DmlListener* listener);
  void RemoveListener(DmlListener* listener);

  const TableSchema& schema() const { return *schema_; }
  std::shared_ptr<const TableSchema> schema_ptr() const { return schema_; }
  const TabletOptions& options() const { return options_; }
  uint64_t last_version() const;
  uint64_t generation() const;
  const std::string& dir() const { return dir_; }

  // Latest committed image of `pk` (writer view); nullopt when absent.
  std::optional<Tuple> Lookup(const Tuple& pk) const;

 private:
  std::optional<Tuple> LookupLocked(const Tuple& pk) const;
  void CheckRow(const Tuple& values) const;
  Tuple PkOf(const Tuple& values) const;
  uint64_t Commit(std::vector<Row> rows, CommitRecord record);
  uint64_t MinorCompactLocked();
  void Publish(std::shared_ptr<const TabletState> state);
  std::shared_ptr<const TabletState> CurrentState() const;
  void WriteManifest(const TabletState& state);
  void RemoveObsoleteFiles(const TabletState& state);

  std::shared_ptr<const TableSchema> schema_;
  std::vector<size_t> pk_idx_;
  TabletOptions options_;
  std::string dir_;

  std::mutex write_mu_;  // DML and compaction
  std::vector<DmlListener*> listeners_;
  uint64_t next_sstable_id_ = 1;

  mutable std::mutex state_mu_;
  std::shared_ptr<const TabletState> state_;
  uint64_t committed_version_ = 0;
};

}  // namespace mercury
