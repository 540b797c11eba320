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

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "mercury/cli/commands.h"
#include "mercury/common/error.h"
#include "mercury/common/file_io.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitEngine = 3;

std::optional<mercury::RefreshPolicy> ParseMode(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "fast") return mercury::RefreshPolicy::kIncremental;
  if (s == "complete") return mercury::RefreshPolicy::kFull;
  auto mode = mercury::ParseRefreshPolicy(s);
  if (!mode) throw mercury::Error(mercury::ErrorCode::kParseError, "unknown refresh mode '" + s + "'");
  return mode;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mercury-mini: embedded hybrid row/column analytical store"};
  app.require_subcommand(1);

  std::string data_dir;
  if (const char* env = std::getenv("MERCURY_DATA_DIR")) data_dir = env;
  app.add_option("--data-dir", data_dir, "Database directory (default $MERCURY_DATA_DIR)");

  auto* ingest = app.add_subcommand("ingest", "Load a CSV or JSON-lines file into a table");
  std::string ingest_table, ingest_path, ingest_format;
  ingest->add_option("table", ingest_table)->required();
  ingest->add_option("file", ingest_path)->required()->check(CLI::ExistingFile);
  ingest->add_option("--format", ingest_format)->check(CLI::IsMember({"csv", "jsonl"}));

  auto* query = app.add_subcommand("query", "Run a SELECT");
  std::string query_text, query_path = "pushdown";
  bool json = false, stats = false, realtime = false;
  query->add_option("text", query_text)->required();
  query->add_flag("--json", json, "Print one JSON object per row");
  query->add_flag("--stats", stats, "Append scan counters as JSON");
  query->add_flag("--realtime", realtime, "Views: merge unrefreshed mlog entries");
  query->add_option("--path", query_path)->check(CLI::IsMember({"pushdown", "row", "executor"}));

  auto* admin = app.add_subcommand("admin", "compact-minor | compact-major | refresh | purge-mlog | stats");
  std::string verb, target, mode;
  admin->add_option("verb", verb)
      ->required()
      ->check(CLI::IsMember({"compact-minor", "compact-major", "refresh", "purge-mlog", "stats"}));
  admin->add_option("target", target, "Table, or view for refresh")->required();
  admin->add_option("--mode", mode, "Refresh mode: incremental|full");

  auto* exec = app.add_subcommand("exec", "Run ';'-separated DDL/DML statements");
  std::string exec_text, exec_file;
  bool exec_json = false;
  exec->add_option("statements", exec_text);
  exec->add_option("-f,--file", exec_file)->check(CLI::ExistingFile);
  exec->add_flag("--json", exec_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  if (data_dir.empty()) {
    std::cerr << "error: --data-dir or MERCURY_DATA_DIR is required\n";
    return kExitUsage;
  }

  try {
    auto db = mercury::Database::Open(data_dir);
    if (*ingest) {
      std::optional<mercury::IngestFormat> fmt;
      if (ingest_format == "csv") fmt = mercury::IngestFormat::kCsv;
      if (ingest_format == "jsonl") fmt = mercury::IngestFormat::kJsonl;
      std::cout << mercury::IngestFile(*db, ingest_table, ingest_path, fmt) << "\n";
    } else if (*query) {
      mercury::QueryOptions opts;
      opts.path = *mercury::ParseExecPath(query_path);
      opts.realtime = realtime;
      auto out = mercury::RunQuery(*db, query_text, opts);
      std::cout << (json ? mercury::FormatJsonLines(out) : mercury::FormatText(out));
      if (stats && out.stats) std::cout << out.stats->ToJson() << "\n";
    } else if (*admin) {
      std::cout << mercury::RunAdmin(*db, verb, target, ParseMode(mode)) << "\n";
    } else if (*exec) {
      if (!exec_file.empty()) exec_text += "\n" + mercury::ReadFileText(exec_file);
      std::cout << mercury::ExecStatements(*db, exec_text, exec_json);
    }
    db->Close();
  } catch (const mercury::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == mercury::ErrorCode::kParseError ? kExitUsage : kExitEngine;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEngine;
  }
  return 0;
}
