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
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "mercury/catalog/schema.h"
#include "mercury/mview/mlog.h"
#include "mercury/storage/tablet.h"
#include "mercury/vectors/aggregate.h"

namespace mercury {

// Maintained state of one group. avg keeps (sum, count) inside its AggState.
struct GroupState {
  int64_t row_count = 0;
  std::vector<AggState> aggs;
};

using Container = std::map<Tuple, GroupState, TupleLess>;

struct RefreshReport {
  std::string mv;
  RefreshPolicy mode = RefreshPolicy::kIncremental;
  // Incremental: mlog entries applied. Full: base rows read.
  uint64_t entries_processed = 0;
  uint64_t groups_touched = 0;
  uint64_t container_rows = 0;
  double duration_ms = 0;

  std::string ToJson() const;
};

// Recomputes the view from the base table at `snapshot`. When `keep` is set
// only groups it accepts are built.
Container ComputeContainer(const MViewDef& def, const TableSchema& base, const Snapshot& snapshot,
                           const std::function<bool(const Tuple&)>& keep = {});

// Simple MAV with a container of per-group states.
class MaterializedView {
 public:
  // `mlog` may be null for full-refresh views; `dir` empty keeps the
  // container in memory only.
  MaterializedView(MViewDef def, Tablet* base, MLog* mlog, std::string dir = {});

  const MViewDef& def() const { return def_; }
  void set_mlog(MLog* mlog);

  // Rebuilds a hidden container at a fresh snapshot and swaps it in.
  RefreshReport FullRefresh();
  // Applies mlog entries after the cursor. kMissingMlog without an mlog,
  // kMlogGap when needed entries were purged.
  RefreshReport IncrementalRefresh();
  RefreshReport Refresh(RefreshPolicy mode);

  // Container rows as of the last refresh: group-by values then aggregates.
  std::vector<Tuple> Read() const;
  // Container merged with the mlog delta between the last refresh and
  // `snapshot`; equals a recompute at `snapshot`.
  std::vector<Tuple> RealtimeRead(const Snapshot& snapshot) const;

  uint64_t cursor() const;
  uint64_t refreshed_version() const;
  size_t container_rows() const;

  // Restores container and cursor from `dir`; returns false when nothing was saved.
  bool Load();

 private:
  std::vector<Tuple> Finalize(const Container& c) const;
  Tuple KeyOf(const Tuple& values) const;
  // Adds (sign > 0) or removes one base row. Returns false when a removed
  // value may have been the group's min or max.
  bool Apply(const Tuple& values, int sign, GroupState* state) const;
  void Save(const Container& c, uint64_t cursor, uint64_t version) const;
  GroupState EmptyState() const;

  MViewDef def_;
  Tablet* base_;
  MLog* mlog_;
  std::string dir_;
  std::vector<BoundAgg> aggs_;
  std::vector<size_t> group_cols_;

  std::mutex refresh_mu_;          // one refresh at a time
  mutable std::shared_mutex mu_;  // container, cursor, refreshed_version
  Container container_;
  uint64_t cursor_ = 0;
  uint64_t refreshed_version_ = 0;
};

}  // namespace mercury
