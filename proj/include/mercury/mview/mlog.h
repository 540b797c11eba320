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
#include <deque>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "mercury/catalog/schema.h"
#include "mercury/storage/row.h"

namespace mercury {

enum class OldNew : uint8_t { kOld, kNew };
std::string_view OldNewName(OldNew v);

struct MLogEntry {
  uint64_t sequence = 0;
  uint64_t commit_version = 0;
  DmlType dmltype = DmlType::kInsert;
  OldNew old_new = OldNew::kNew;
  Tuple pk;
  Tuple values;

  bool operator==(const MLogEntry&) const = default;
};

// Change log of one base table. Sequences start at 1 and are dense.
class MLog : public DmlListener {
 public:
  explicit MLog(std::shared_ptr<const TableSchema> schema);

  void OnCommit(const CommitRecord& record) override;

  // Entries with sequence > after_sequence and commit_version ≤ max_version.
  // kMlogGap when some of them were purged.
  std::vector<MLogEntry> Read(uint64_t after_sequence, uint64_t max_version) const;
  // Entries with commit_version in (from_version, to_version].
  std::vector<MLogEntry> ReadVersions(uint64_t from_version, uint64_t to_version) const;
  // Highest sequence whose commit_version ≤ version (0 if none).
  uint64_t LastSequenceAt(uint64_t version) const;

  // Drops entries with sequence ≤ upto; returns how many went.
  size_t Purge(uint64_t upto);

  uint64_t last_sequence() const;
  uint64_t purged_upto() const;
  size_t size() const;
  std::vector<MLogEntry> Entries() const;

  std::string ToJson() const;
  void LoadJson(const std::string& text);

 private:
  std::shared_ptr<const TableSchema> schema_;
  std::vector<size_t> pk_idx_;
  mutable std::shared_mutex mu_;
  std::deque<MLogEntry> entries_;
  uint64_t next_sequence_ = 1;
  uint64_t purged_upto_ = 0;
  uint64_t purged_version_ = 0;  // commit_version of the last purged entry
};

}  // namespace mercury
