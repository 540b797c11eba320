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

#include "oracle.h"

#include <algorithm>
#include <cstring>
#include <set>

namespace mercury::testing {

namespace {

int Sign(double d) { return d < 0 ? -1 : (d > 0 ? 1 : 0); }

double AsDouble(const Value& v) {
  return std::holds_alternative<int64_t>(v) ? static_cast<double>(std::get<int64_t>(v)) : std::get<double>(v);
}

int Rank(const Value& v) {
  if (std::holds_alternative<std::monostate>(v)) return 0;
  if (std::holds_alternative<std::string>(v)) return 2;
  return 1;
}

}  // namespace

int OracleCompare(const Value& a, const Value& b) {
  int ra = Rank(a), rb = Rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  if (ra == 0) return 0;
  if (ra == 2) {
    const auto& x = std::get<std::string>(a);
    const auto& y = std::get<std::string>(b);
    size_t n = std::min(x.size(), y.size());
    for (size_t i = 0; i < n; ++i) {
      auto cx = static_cast<unsigned char>(x[i]);
      auto cy = static_cast<unsigned char>(y[i]);
      if (cx != cy) return cx < cy ? -1 : 1;
    }
    return x.size() == y.size() ? 0 : (x.size() < y.size() ? -1 : 1);
  }
  if (std::holds_alternative<int64_t>(a) && std::holds_alternative<int64_t>(b)) {
    int64_t x = std::get<int64_t>(a), y = std::get<int64_t>(b);
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  return Sign(AsDouble(a) - AsDouble(b));
}

int OracleCompareTuples(const Tuple& a, const Tuple& b) {
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    int c = OracleCompare(a[i], b[i]);
    if (c) return c;
  }
  return a.size() == b.size() ? 0 : (a.size() < b.size() ? -1 : 1);
}

bool OracleMatches(const Value& cell, CompareOp op, const Value& literal) {
  if (Rank(cell) == 0 || Rank(literal) == 0) return false;
  int c = OracleCompare(cell, literal);
  switch (op) {
    case CompareOp::kEq: return c == 0;
    case CompareOp::kNe: return c != 0;
    case CompareOp::kLt: return c < 0;
    case CompareOp::kLe: return c <= 0;
    case CompareOp::kGt: return c > 0;
    case CompareOp::kGe: return c >= 0;
  }
  return false;
}

bool OracleMatchesAll(const Tuple& row, const std::vector<Comparison>& preds) {
  for (const auto& p : preds) {
    if (!OracleMatches(row[p.column], p.op, p.literal)) return false;
  }
  return true;
}

bool SameValue(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<double>(a)) return std::get<double>(a) == std::get<double>(b);
  return a == b;
}

bool SameRows(const std::vector<Tuple>& a, const std::vector<Tuple>& b, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (a.size() != b.size()) {
    return fail("row count " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  for (size_t r = 0; r < a.size(); ++r) {
    if (a[r].size() != b[r].size()) return fail("arity differs at row " + std::to_string(r));
    for (size_t c = 0; c < a[r].size(); ++c) {
      if (!SameValue(a[r][c], b[r][c])) {
        return fail("row " + std::to_string(r) + ": " + TupleToString(a[r]) + " vs " + TupleToString(b[r]));
      }
    }
  }
  return true;
}

std::vector<OracleAgg> OracleAggs(const TableSchema& schema, const std::vector<AggSpec>& specs) {
  std::vector<OracleAgg> out;
  for (const auto& s : specs) {
    OracleAgg a;
    a.func = s.function;
    if (s.column) {
      for (size_t c = 0; c < schema.columns.size(); ++c) {
        if (schema.columns[c].name == *s.column) {
          a.column = c;
          a.input_type = schema.columns[c].type;
        }
      }
    }
    out.push_back(a);
  }
  return out;
}

Tuple OracleAggregate(const std::vector<Tuple>& rows, const std::vector<OracleAgg>& aggs) {
  Tuple out;
  for (const auto& a : aggs) {
    if (a.func == AggFunc::kCountStar) {
      out.push_back(static_cast<int64_t>(rows.size()));
      continue;
    }
    std::vector<Value> vals;
    for (const auto& r : rows) {
      if (Rank(r[*a.column]) != 0) vals.push_back(r[*a.column]);
    }
    switch (a.func) {
      case AggFunc::kCountCol: out.push_back(static_cast<int64_t>(vals.size())); break;
      case AggFunc::kSum:
      case AggFunc::kAvg: {
        if (vals.empty()) {
          out.push_back(std::monostate{});
          break;
        }
        if (a.input_type == DataType::kInt64) {
          uint64_t sum = 0;
          for (const auto& v : vals) sum += static_cast<uint64_t>(std::get<int64_t>(v));
          auto s = static_cast<int64_t>(sum);
          if (a.func == AggFunc::kSum) {
            out.push_back(s);
          } else {
            out.push_back(static_cast<double>(s) / static_cast<double>(vals.size()));
          }
        } else {
          double sum = 0;
          for (const auto& v : vals) sum += std::get<double>(v);
          out.push_back(a.func == AggFunc::kSum ? sum : sum / static_cast<double>(vals.size()));
        }
        break;
      }
      case AggFunc::kMin:
      case AggFunc::kMax: {
        if (vals.empty()) {
          out.push_back(std::monostate{});
          break;
        }
        Value best = vals[0];
        for (const auto& v : vals) {
          int c = OracleCompare(v, best);
          if ((a.func == AggFunc::kMin && c < 0) || (a.func == AggFunc::kMax && c > 0)) best = v;
        }
        out.push_back(best);
        break;
      }
      default: break;
    }
  }
  return out;
}

OracleTable::OracleTable(TableSchema schema) : schema_(std::move(schema)) {
  for (const auto& name : schema_.pk) {
    for (size_t c = 0; c < schema_.columns.size(); ++c) {
      if (schema_.columns[c].name == name) pk_idx_.push_back(c);
    }
  }
}

Tuple OracleTable::PkOf(const Tuple& row) const {
  Tuple pk;
  for (size_t c : pk_idx_) pk.push_back(row[c]);
  return pk;
}

bool OracleTable::Insert(const Tuple& row) {
  return rows_.emplace(PkOf(row), row).second;
}

bool OracleTable::Update(const Tuple& pk, const std::vector<std::pair<size_t, Value>>& assignments) {
  auto it = rows_.find(pk);
  if (it == rows_.end()) return false;
  Tuple row = it->second;
  for (const auto& [c, v] : assignments) row[c] = v;
  Tuple new_pk = PkOf(row);
  if (OracleCompareTuples(new_pk, pk) != 0) {
    if (rows_.count(new_pk)) return false;
    rows_.erase(it);
    rows_.emplace(new_pk, row);
  } else {
    it->second = row;
  }
  return true;
}

bool OracleTable::Delete(const Tuple& pk) { return rows_.erase(pk) > 0; }

std::vector<Tuple> OracleTable::Rows() const {
  std::vector<Tuple> out;
  for (const auto& [k, r] : rows_) out.push_back(r);
  return out;
}

std::vector<Tuple> OracleTable::Keys() const {
  std::vector<Tuple> out;
  for (const auto& [k, r] : rows_) out.push_back(k);
  return out;
}

std::vector<Tuple> OracleTable::Scan(const std::vector<Comparison>& preds, const std::vector<size_t>& projection) const {
  std::vector<Tuple> out;
  for (const auto& [k, r] : rows_) {
    if (!OracleMatchesAll(r, preds)) continue;
    if (projection.empty()) {
      out.push_back(r);
      continue;
    }
    Tuple t;
    for (size_t c : projection) t.push_back(r[c]);
    out.push_back(std::move(t));
  }
  return out;
}

Tuple OracleTable::Aggregate(const std::vector<Comparison>& preds, const std::vector<AggSpec>& aggs) const {
  return OracleAggregate(Scan(preds, {}), OracleAggs(schema_, aggs));
}

std::vector<Tuple> OracleTable::GroupBy(const std::vector<Comparison>& preds, size_t column,
                                        const std::vector<AggSpec>& aggs) const {
  std::map<Tuple, std::vector<Tuple>, OracleLess> groups;
  for (const auto& r : Scan(preds, {})) groups[Tuple{r[column]}].push_back(r);
  auto bound = OracleAggs(schema_, aggs);
  std::vector<Tuple> out;
  for (const auto& [key, rows] : groups) {
    Tuple t = key;
    for (auto& v : OracleAggregate(rows, bound)) t.push_back(std::move(v));
    out.push_back(std::move(t));
  }
  return out;
}

std::string RandomString(Rng& rng, int64_t domain) {
  // Shared prefixes and varied lengths so prefix and dictionary encodings apply.
  static const char* kStems[] = {"", "a", "ab", "abc", "item-", "zz", "b\xc3\xa9"};
  int64_t k = rng.Int(0, domain - 1);
  std::string s = kStems[k % 7];
  s += std::to_string(k / 7);
  return s;
}

Value RandomValue(Rng& rng, DataType type, int64_t domain, double null_rate) {
  if (rng.Chance(null_rate)) return std::monostate{};
  switch (type) {
    case DataType::kInt64: return rng.Int(-domain, domain);
    case DataType::kFloat64: return static_cast<double>(rng.Int(-4 * domain, 4 * domain)) / 4.0 + 0.0;
    case DataType::kUtf8: return RandomString(rng, domain);
  }
  return std::monostate{};
}

Comparison RandomComparison(Rng& rng, const TableSchema& schema, size_t column, int64_t domain) {
  Comparison c;
  c.column = column;
  c.op = static_cast<CompareOp>(rng.Int(0, 5));
  c.literal = RandomValue(rng, schema.columns[column].type, domain + domain / 4 + 1, 0.0);
  return c;
}

}  // namespace mercury::testing
