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

#include "mercury/mview/mlog.h"

#include <algorithm>
#include <json.hpp>
#include <mutex>

#include "mercury/common/error.h"
#include "mercury/mview/value_json.h"

namespace mercury {

using nlohmann::json;

std::string_view OldNewName(OldNew v) { return v == OldNew::kOld ? "Old" : "New"; }

MLog::MLog(std::shared_ptr<const TableSchema> schema) : schema_(std::move(schema)), pk_idx_(schema_->PkIndices()) {}

void MLog::OnCommit(const CommitRecord& record) {
  std::unique_lock lock(mu_);
  auto append = [&](OldNew on, const Tuple& values) {
    MLogEntry e;
    e.sequence = next_sequence_++;
    e.commit_version = record.version;
    e.dmltype = record.type;
    e.old_new = on;
    for (size_t k : pk_idx_) e.pk.push_back(values[k]);
    e.values = values;
    entries_.push_back(std::move(e));
  };
  if (record.old_values) append(OldNew::kOld, *record.old_values);
  if (record.new_values) append(OldNew::kNew, *record.new_values);
}

std::vector<MLogEntry> MLog::Read(uint64_t after_sequence, uint64_t max_version) const {
  std::shared_lock lock(mu_);
  if (after_sequence < purged_upto_) {
    throw Error(ErrorCode::kMlogGap, "entries after sequence " + std::to_string(after_sequence) +
                                         " were purged up to " + std::to_string(purged_upto_));
  }
  std::vector<MLogEntry> out;
  // Sequences are dense, so the first wanted entry sits at a computable index.
  size_t start = after_sequence - purged_upto_;
  for (size_t i = start; i < entries_.size() && entries_[i].commit_version <= max_version; ++i) {
    out.push_back(entries_[i]);
  }
  return out;
}

std::vector<MLogEntry> MLog::ReadVersions(uint64_t from_version, uint64_t to_version) const {
  std::shared_lock lock(mu_);
  auto lo = std::upper_bound(entries_.begin(), entries_.end(), from_version,
                             [](uint64_t v, const MLogEntry& e) { return v < e.commit_version; });
  if (from_version < purged_version_ && from_version < to_version) {
    throw Error(ErrorCode::kMlogGap, "entries after version " + std::to_string(from_version) + " were purged");
  }
  std::vector<MLogEntry> out;
  for (auto it = lo; it != entries_.end() && it->commit_version <= to_version; ++it) out.push_back(*it);
  return out;
}

uint64_t MLog::LastSequenceAt(uint64_t version) const {
  std::shared_lock lock(mu_);
  auto it = std::upper_bound(entries_.begin(), entries_.end(), version,
                             [](uint64_t v, const MLogEntry& e) { return v < e.commit_version; });
  if (it == entries_.begin()) return purged_upto_;
  return std::prev(it)->sequence;
}

size_t MLog::Purge(uint64_t upto) {
  std::unique_lock lock(mu_);
  size_t n = 0;
  while (!entries_.empty() && entries_.front().sequence <= upto) {
    purged_upto_ = entries_.front().sequence;
    purged_version_ = entries_.front().commit_version;
    entries_.pop_front();
    ++n;
  }
  purged_upto_ = std::max(purged_upto_, std::min(upto, next_sequence_ - 1));
  return n;
}

uint64_t MLog::last_sequence() const {
  std::shared_lock lock(mu_);
  return next_sequence_ - 1;
}

uint64_t MLog::purged_upto() const {
  std::shared_lock lock(mu_);
  return purged_upto_;
}

size_t MLog::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

std::vector<MLogEntry> MLog::Entries() const {
  std::shared_lock lock(mu_);
  return {entries_.begin(), entries_.end()};
}

std::string MLog::ToJson() const {
  std::shared_lock lock(mu_);
  json j;
  j["table"] = schema_->name;
  j["next_sequence"] = next_sequence_;
  j["purged_upto"] = purged_upto_;
  j["purged_version"] = purged_version_;
  json arr = json::array();
  for (const auto& e : entries_) {
    arr.push_back({{"sequence", e.sequence},
                   {"commit_version", e.commit_version},
                   {"dmltype", DmlTypeName(e.dmltype)},
                   {"old_new", OldNewName(e.old_new)},
                   {"values", TupleToJson(e.values)}});
  }
  j["entries"] = arr;
  return j.dump();
}

void MLog::LoadJson(const std::string& text) {
  std::unique_lock lock(mu_);
  try {
    json j = json::parse(text);
    next_sequence_ = j.at("next_sequence").get<uint64_t>();
    purged_upto_ = j.at("purged_upto").get<uint64_t>();
    purged_version_ = j.at("purged_version").get<uint64_t>();
    entries_.clear();
    for (const auto& je : j.at("entries")) {
      MLogEntry e;
      e.sequence = je.at("sequence").get<uint64_t>();
      e.commit_version = je.at("commit_version").get<uint64_t>();
      std::string dml = je.at("dmltype").get<std::string>();
      e.dmltype = dml == "insert" ? DmlType::kInsert : dml == "update" ? DmlType::kUpdate : DmlType::kDelete;
      e.old_new = je.at("old_new").get<std::string>() == "Old" ? OldNew::kOld : OldNew::kNew;
      e.values = TupleFromJson(je.at("values"), schema_->ColumnTypes());
      for (size_t k : pk_idx_) e.pk.push_back(e.values[k]);
      entries_.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruption, "mlog of " + schema_->name + ": " + e.what());
  }
}

}  // namespace mercury
