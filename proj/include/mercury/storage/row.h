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
#include <optional>

#include "mercury/common/value.h"

namespace mercury {

// One committed image of a primary key. Tombstones keep the pk columns of
// `values` and NULL everywhere else.
struct Row {
  Tuple pk;
  Tuple values;
  uint64_t version = 0;
  bool tombstone = false;

  bool operator==(const Row&) const = default;
};

// Inclusive primary-key bounds; an absent bound is open.
struct PkRange {
  std::optional<Tuple> lo;
  std::optional<Tuple> hi;

  static PkRange All() { return {}; }
  bool Contains(const Tuple& pk) const {
    return (!lo || CompareTuples(pk, *lo) >= 0) && (!hi || CompareTuples(pk, *hi) <= 0);
  }
  bool Overlaps(const Tuple& first, const Tuple& last) const {
    return (!lo || CompareTuples(last, *lo) >= 0) && (!hi || CompareTuples(first, *hi) <= 0);
  }
};

enum class DmlType : uint8_t { kInsert, kUpdate, kDelete };
std::string_view DmlTypeName(DmlType type);

// What one committed DML statement changed. Updates carry both images; an
// update that moves the pk still commits as a single update.
struct CommitRecord {
  uint64_t version = 0;
  DmlType type = DmlType::kInsert;
  std::optional<Tuple> old_values;
  std::optional<Tuple> new_values;
};

// Invoked under the table's writer lock, before the commit becomes visible
// to new snapshots.
class DmlListener {
 public:
  virtual ~DmlListener() = default;
  virtual void OnCommit(const CommitRecord& record) = 0;
};

}  // namespace mercury
