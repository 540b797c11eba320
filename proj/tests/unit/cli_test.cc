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

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "expect_error.h"
#include "mercury/cli/commands.h"
#include "mercury/cli/csv.h"
#include "mercury/cli/query.h"
#include "mercury/db/database.h"

namespace mercury {
namespace {

namespace fs = std::filesystem;

TEST(Csv, QuotingAndNulls) {
  auto recs = ParseCsv("a,b,c\n1,,\"\"\n\"x,\"\"y\"\"\nz\",2,3\n\n4,5,6");
  ASSERT_EQ(recs.size(), 4u);
  EXPECT_EQ(recs[1].fields[0], "1");
  EXPECT_FALSE(recs[1].fields[1]);
  EXPECT_EQ(recs[1].fields[2], "");
  EXPECT_EQ(recs[2].fields[0], "x,\"y\"\nz");
  EXPECT_EQ(recs[2].line, 3u);
  EXPECT_EQ(recs[3].line, 6u);
  EXPECT_ERROR_CODE(ParseCsv("a\n\"open"), ErrorCode::kParseError);
  for (std::string s : {"plain", "with,comma", "q\"uote", "line\nbreak", ""}) {
    auto back = ParseCsv(CsvEscape(s) + ",x");
    EXPECT_EQ(back[0].fields[0], s);
  }
}

TEST(Parser, TokensCarryOffsets) {
  auto toks = Tokenize("select \"Mixed Col\", 'it''s' -- note\n <= -1.5e3");
  ASSERT_EQ(toks.size(), 7u);
  EXPECT_EQ(toks[0].kind, TokenKind::kKeyword);
  EXPECT_EQ(toks[0].text, "SELECT");
  EXPECT_EQ(toks[1].kind, TokenKind::kIdent);
  EXPECT_EQ(toks[1].text, "Mixed Col");
  EXPECT_EQ(toks[3].text, "it's");
  EXPECT_EQ(toks[3].offset, 20u);
  EXPECT_EQ(toks[4].text, "<=");
  EXPECT_EQ(toks[5].kind, TokenKind::kFloat);
  EXPECT_EQ(toks[6].kind, TokenKind::kEnd);
  try {
    Tokenize("select 'unterminated");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("at byte 7"), std::string::npos) << e.what();
  }
}

TEST(Parser, MiniQueryShapes) {
  auto q = ParseMiniQuery("SELECT c2, count(*), sum(c1) AS total FROM t1 WHERE c1 >= 3 AND c2 <> 'x' GROUP BY c2");
  ASSERT_EQ(q.items.size(), 3u);
  EXPECT_EQ(q.items[1].Label(), "count(*)");
  EXPECT_EQ(q.items[2].Label(), "total");
  EXPECT_EQ(q.where.size(), 2u);
  EXPECT_EQ(q.where[1].op, CompareOp::kNe);
  EXPECT_EQ(q.group_by, "c2");
  EXPECT_ERROR_CODE(ParseMiniQuery("SELECT *, c1 FROM t"), ErrorCode::kParseError);
  EXPECT_ERROR_CODE(ParseMiniQuery("SELECT c1, count(*) FROM t"), ErrorCode::kParseError);
  EXPECT_ERROR_CODE(ParseMiniQuery("SELECT c1, count(*) FROM t GROUP BY c2"), ErrorCode::kParseError);
  EXPECT_ERROR_CODE(ParseMiniQuery("SELECT c1 FROM t WHERE c1 = 1 OR c1 = 2"), ErrorCode::kParseError);
  EXPECT_ERROR_CODE(ParseMiniQuery("SELECT FROM t"), ErrorCode::kParseError);
}

TEST(Parser, Statements) {
  auto stmts = ParseStatements(
      "CREATE TABLE t (a INT PRIMARY KEY, b VARCHAR(10), c DOUBLE NOT NULL) STORE = redundant;"
      "CREATE MATERIALIZED VIEW LOG ON t;"
      "CREATE MATERIALIZED VIEW m REFRESH COMPLETE AS SELECT b, count(*) FROM t GROUP BY b;"
      "INSERT INTO t (a, c) VALUES (1, 2.5), (2, -1);"
      "UPDATE t SET b = NULL WHERE a = 1;"
      "DELETE FROM t WHERE a > 0;"
      "DROP MATERIALIZED VIEW m; DROP TABLE t");
  ASSERT_EQ(stmts.size(), 8u);
  const auto& ct = std::get<CreateTableStmt>(stmts[0]).schema;
  EXPECT_EQ(ct.store_mode, StoreMode::kRedundant);
  EXPECT_EQ(ct.pk, std::vector<std::string>{"a"});
  EXPECT_FALSE(ct.columns[0].nullable);
  EXPECT_TRUE(ct.columns[1].nullable);
  EXPECT_FALSE(ct.columns[2].nullable);
  const auto& mv = std::get<CreateMViewStmt>(stmts[2]);
  EXPECT_TRUE(mv.policy_given);
  EXPECT_EQ(mv.def.refresh_policy, RefreshPolicy::kFull);
  EXPECT_EQ(mv.def.select_items[0].output_name, "count_star");
  EXPECT_EQ(std::get<InsertStmt>(stmts[3]).rows.size(), 2u);
  EXPECT_TRUE(std::get<DropStmt>(stmts[6]).mview);
  EXPECT_ERROR_CODE(ParseStatements("CREATE MATERIALIZED VIEW m AS SELECT count(*) FROM t WHERE a = 1"),
                    ErrorCode::kParseError);
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    db_ = Database::OpenInMemory();
    ExecStatements(*db_, "CREATE TABLE t (id INT PRIMARY KEY, name TEXT, score FLOAT)");
  }
  std::unique_ptr<Database> db_;
};

TEST_F(CliTest, IngestErrorsAreLocated) {
  EXPECT_ERROR_CODE(IngestText(*db_, "t", "id,name\n1,a\n", IngestFormat::kCsv), ErrorCode::kSchemaMismatch);
  EXPECT_ERROR_CODE(IngestText(*db_, "t", "id,name,nope\n", IngestFormat::kCsv), ErrorCode::kSchemaMismatch);
  try {
    IngestText(*db_, "t", "id,name,score\n1,a,0.5\n2,b,oops\n", IngestFormat::kCsv);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("line 3, column 3"), std::string::npos) << e.what();
  }
  EXPECT_ERROR_CODE(IngestText(*db_, "t", "id,name,score\n,a,1\n", IngestFormat::kCsv), ErrorCode::kParseError);
  EXPECT_ERROR_CODE(IngestText(*db_, "t", "id,name,score\n1,a,nan\n", IngestFormat::kCsv), ErrorCode::kParseError);
  EXPECT_ERROR_CODE(IngestText(*db_, "t", "id,name,score\n1,a,1\n1,b,2\n", IngestFormat::kCsv),
                    ErrorCode::kDuplicateKey);
  // Failed ingests leave the table untouched.
  EXPECT_TRUE(RunQuery(*db_, "SELECT * FROM t").rows.empty());
  EXPECT_ERROR_CODE(IngestText(*db_, "t", "{\"id\": 1, \"extra\": 2}\n", IngestFormat::kJsonl),
                    ErrorCode::kSchemaMismatch);
  EXPECT_ERROR_CODE(IngestText(*db_, "t", "{\"id\": 1.5}\n", IngestFormat::kJsonl), ErrorCode::kParseError);
  EXPECT_EQ(GuessIngestFormat("x.ndjson"), IngestFormat::kJsonl);
  EXPECT_EQ(GuessIngestFormat("x.csv"), IngestFormat::kCsv);
}

TEST_F(CliTest, CsvQueryJsonRoundTrip) {
  std::string csv = "score,id,name\n0.1,1,\"a,b\"\n,2,\n-2.5e10,3,\"\"\n1e-300,4,é\n";
  EXPECT_EQ(IngestText(*db_, "t", csv, IngestFormat::kCsv), 4u);
  auto first = RunQuery(*db_, "SELECT * FROM t");
  auto jsonl = FormatJsonLines(first);
  ExecStatements(*db_, "CREATE TABLE u (id INT PRIMARY KEY, name TEXT, score FLOAT)");
  EXPECT_EQ(IngestText(*db_, "u", jsonl, IngestFormat::kJsonl), 4u);
  auto second = RunQuery(*db_, "SELECT * FROM u");
  EXPECT_EQ(first.rows, second.rows);
  EXPECT_EQ(first.rows[2][1], Value{std::string()});
  EXPECT_EQ(first.rows[1][1], Value{});
}

TEST_F(CliTest, PathsAndCompactionAreInvisible) {
  ExecStatements(*db_, "INSERT INTO t VALUES (1, 'x', 1.0), (2, 'y', 2.0), (3, 'x', 4.0)");
  auto q = "SELECT name, count(*), avg(score) FROM t WHERE id >= 1 GROUP BY name";
  auto before = RunQuery(*db_, q).rows;
  RunAdmin(*db_, "compact-minor", "t");
  EXPECT_EQ(RunQuery(*db_, q).rows, before);
  RunAdmin(*db_, "compact-major", "t");
  for (auto path : {ExecPath::kPushdown, ExecPath::kExecutor}) {
    EXPECT_EQ(RunQuery(*db_, q, {path, false}).rows, before);
  }
  EXPECT_ERROR_CODE(RunQuery(*db_, q, {ExecPath::kRow, false}), ErrorCode::kFormatUnavailable);
  EXPECT_ERROR_CODE(RunQuery(*db_, "SELECT * FROM t WHERE id = 1.5"), ErrorCode::kTypeMismatch);
  EXPECT_EQ(RunQuery(*db_, "SELECT id FROM t WHERE score = 4").rows, std::vector<Tuple>{{int64_t{3}}});
  EXPECT_ERROR_CODE(RunAdmin(*db_, "compact-major", "t"), ErrorCode::kNothingToCompact);
  EXPECT_ERROR_CODE(RunAdmin(*db_, "explode", "t"), ErrorCode::kParseError);
}

TEST_F(CliTest, ExecWorkedExample) {
  auto out = ExecStatements(*db_,
                            "CREATE TABLE t1 (c1 INT PRIMARY KEY, c2 INT);"
                            "CREATE MATERIALIZED VIEW LOG ON t1;"
                            "CREATE MATERIALIZED VIEW mv AS SELECT count(c1) AS cnt FROM t1;"
                            "INSERT INTO t1 VALUES (1, 1), (2, 2), (3, 3);"
                            "UPDATE t1 SET c2 = 4 WHERE c1 = 3;"
                            "DELETE FROM t1 WHERE c1 = 1;"
                            "INSERT INTO t1 VALUES (4, 4)");
  EXPECT_FALSE(out.empty());
  // The view was last refreshed when it was created.
  EXPECT_EQ(RunQuery(*db_, "SELECT * FROM mv").rows, std::vector<Tuple>{{int64_t{0}}});
  EXPECT_EQ(RunQuery(*db_, "SELECT * FROM mv", {ExecPath::kPushdown, true}).rows, std::vector<Tuple>{{int64_t{3}}});
  auto rep = RunAdmin(*db_, "refresh", "mv");
  EXPECT_NE(rep.find("\"entries_processed\":7"), std::string::npos) << rep;
  EXPECT_EQ(RunQuery(*db_, "SELECT * FROM mv").rows, std::vector<Tuple>{{int64_t{3}}});
  EXPECT_ERROR_CODE(RunQuery(*db_, "SELECT count(*) FROM mv"), ErrorCode::kUnsupported);
  auto text = FormatText(RunQuery(*db_, "SELECT c1, c2 FROM t1"));
  EXPECT_NE(text.find("c1 | c2"), std::string::npos) << text;
}

class BinaryTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("mercury_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  int Run(const std::string& args, std::string* out = nullptr) {
    fs::path capture = dir_.string() + ".out";
    std::string cmd = std::string(MERCURY_CLI_PATH) + " --data-dir " + dir_.string() + " " + args + " >" +
                      capture.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    if (out) {
      std::ifstream in(capture);
      out->assign(std::istreambuf_iterator<char>(in), {});
    }
    fs::remove(capture);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  fs::path dir_;
};

TEST_F(BinaryTest, ExitCodes) {
  std::string out;
  EXPECT_EQ(Run("exec 'CREATE TABLE t (k INT PRIMARY KEY, v TEXT)'"), 0);
  EXPECT_EQ(Run("query 'SELEC * FROM t'"), 2);
  EXPECT_EQ(Run("query 'SELECT * FROM nope'"), 3);
  EXPECT_EQ(Run("bogus"), 2);
  EXPECT_EQ(Run("query 'SELECT * FROM t' --path sideways"), 2);
  {
    std::ofstream f(dir_.string() + ".csv");
    f << "k,v\n1,a\n2,\n";
  }
  EXPECT_EQ(Run("ingest t " + dir_.string() + ".csv"), 0);
  EXPECT_EQ(Run("ingest t " + dir_.string() + ".csv"), 3);
  fs::remove(dir_.string() + ".csv");
  EXPECT_EQ(Run("query 'SELECT count(*) FROM t' --json --stats", &out), 0);
  EXPECT_NE(out.find("\"count(*)\":2"), std::string::npos) << out;
  EXPECT_NE(out.find("blocks_total"), std::string::npos) << out;
  EXPECT_EQ(Run("admin compact-major t"), 0);
  EXPECT_EQ(Run("admin stats t", &out), 0);
  EXPECT_NE(out.find("\"generation\""), std::string::npos) << out;
}

}  // namespace
}  // namespace mercury
