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

#include <cstddef>
#include <map>
#include <optional>
#include <shared_mutex>
#include <vector>

#include "mercury/storage/row.h"

namespace mercury {

// pk-ordered multi-version write buffer. Writers append versions; readers see
// the versions at or below their read version.
class MemTable {
 public:
  // `row.version` must exceed every version already stored for the pk.
  void Put(Row row);

  // Newest version of `pk` at or below `read_version`.
  std::optional<Row> Get(const Tuple& pk, uint64_t read_version) const;

  // Appends, in pk order, the newest version ≤ read_version of every pk in
  // `range`.
  void CollectVisible(uint64_t read_version, const PkRange& range, std::vector<Row>* out) const;

  // Every stored version in (pk, version) order.
  std::vector<Row> AllVersions() const;

  size_t byte_size() const;
  size_t version_count() const;
  bool empty() const { return version_count() == 0; }

 private:
  mutable std::shared_mutex mu_;
  std::map<Tuple, std::vector<Row>, TupleLess> entries_;
  size_t byte_size_ = 0;
  size_t versions_ = 0;
};

// Rough in-memory footprint used for the freeze threshold.
size_t EstimateRowBytes(const Row& row);

}  // namespace mercury
