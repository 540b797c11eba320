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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mercury/cli/query.h"
#include "mercury/db/database.h"
#include "mercury/scan/scan.h"

namespace mercury {

enum class ExecPath : uint8_t { kPushdown, kRow, kExecutor };

std::optional<ExecPath> ParseExecPath(std::string_view name);

struct QueryOptions {
  ExecPath path = ExecPath::kPushdown;
  // Views only: overlay mlog entries newer than the last refresh.
  bool realtime = false;
};

struct QueryOutput {
  std::vector<std::string> columns;
  std::vector<Tuple> rows;
  // Absent for view reads.
  std::optional<ScanStats> stats;
};

// Maps a query onto a scan plan over `snapshot`. Also reports, for every
// select item, its position in the executor's output row.
ScanPlan BindQuery(const MiniQuery& query, const Snapshot& snapshot, std::vector<size_t>* output_map = nullptr);

// Literal coerced to `type`; ints widen to float, anything else is kTypeMismatch.
Value CoerceLiteral(const Value& literal, DataType type, const std::string& column);

QueryOutput RunQuery(Database& db, const MiniQuery& query, const QueryOptions& options = {});
QueryOutput RunQuery(Database& db, std::string_view text, const QueryOptions& options = {});

// Aligned text table, or one JSON object per row.
std::string FormatText(const QueryOutput& out);
std::string FormatJsonLines(const QueryOutput& out);

enum class IngestFormat : uint8_t { kCsv, kJsonl };

// Picks jsonl for *.jsonl / *.json paths, csv otherwise.
IngestFormat GuessIngestFormat(std::string_view path);

// Inserts every record or none: all records are parsed and checked for
// duplicate keys before the first insert. Returns the row count.
size_t IngestText(Database& db, const std::string& table, std::string_view text, IngestFormat format);
size_t IngestFile(Database& db, const std::string& table, const std::string& path,
                  std::optional<IngestFormat> format = std::nullopt);

// verb ∈ {compact-minor, compact-major, refresh, purge-mlog, stats}; returns
// the report as a JSON document.
std::string RunAdmin(Database& db, std::string_view verb, const std::string& target,
                     std::optional<RefreshPolicy> mode = std::nullopt);

// Runs ';'-separated statements and returns their printed output.
std::string ExecStatements(Database& db, std::string_view text, bool json = false);

}  // namespace mercury
