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

#include "mercury/storage/memtable.h"

#include <algorithm>
#include <mutex>

#include "mercury/common/error.h"

namespace mercury {

std::string_view DmlTypeName(DmlType type) {
  switch (type) {
    case DmlType::kInsert: return "insert";
    case DmlType::kUpdate: return "update";
    case DmlType::kDelete: return "delete";
  }
  return "?";
}

size_t EstimateRowBytes(const Row& row) {
  size_t bytes = 48;
  for (const auto& v : row.values) {
    bytes += sizeof(Value);
    if (const auto* s = std::get_if<std::string>(&v)) bytes += s->size();
  }
  return bytes;
}

void MemTable::Put(Row row) {
  std::unique_lock lock(mu_);
  auto& versions = entries_[row.pk];
  if (!versions.empty() && versions.back().version >= row.version) {
    throw Error(ErrorCode::kInvalidArgument, "memtable version regression for pk " + TupleToString(row.pk));
  }
  byte_size_ += EstimateRowBytes(row);
  ++versions_;
  versions.push_back(std::move(row));
}

namespace {

const Row* NewestAtOrBelow(const std::vector<Row>& versions, uint64_t read_version) {
  auto it = std::upper_bound(versions.begin(), versions.end(), read_version,
                             [](uint64_t v, const Row& r) { return v < r.version; });
  return it == versions.begin() ? nullptr : &*std::prev(it);
}

}  // namespace

std::optional<Row> MemTable::Get(const Tuple& pk, uint64_t read_version) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(pk);
  if (it == entries_.end()) return std::nullopt;
  const Row* r = NewestAtOrBelow(it->second, read_version);
  return r ? std::optional<Row>(*r) : std::nullopt;
}

void MemTable::CollectVisible(uint64_t read_version, const PkRange& range, std::vector<Row>* out) const {
  std::shared_lock lock(mu_);
  auto it = range.lo ? entries_.lower_bound(*range.lo) : entries_.begin();
  for (; it != entries_.end(); ++it) {
    if (range.hi && CompareTuples(it->first, *range.hi) > 0) break;
    if (const Row* r = NewestAtOrBelow(it->second, read_version)) out->push_back(*r);
  }
}

std::vector<Row> MemTable::AllVersions() const {
  std::shared_lock lock(mu_);
  std::vector<Row> out;
  out.reserve(versions_);
  for (const auto& [pk, versions] : entries_) out.insert(out.end(), versions.begin(), versions.end());
  return out;
}

size_t MemTable::byte_size() const {
  std::shared_lock lock(mu_);
  return byte_size_;
}

size_t MemTable::version_count() const {
  std::shared_lock lock(mu_);
  return versions_;
}

}  // namespace mercury
