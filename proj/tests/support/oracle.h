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

// Brute-force reference models used to check the engine. Nothing here calls
// into the engine's comparison, encoding or aggregation code.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mercury/catalog/schema.h"
#include "mercury/common/predicate.h"
#include "mercury/common/value.h"

namespace mercury::testing {

// NULL first, then numbers by value, then strings by unsigned bytes.
int OracleCompare(const Value& a, const Value& b);
int OracleCompareTuples(const Tuple& a, const Tuple& b);

struct OracleLess {
  bool operator()(const Tuple& a, const Tuple& b) const { return OracleCompareTuples(a, b) < 0; }
};

bool OracleMatches(const Value& cell, CompareOp op, const Value& literal);
bool OracleMatchesAll(const Tuple& row, const std::vector<Comparison>& preds);

// Exact equality including the variant alternative; 0.0 == -0.0.
bool SameValue(const Value& a, const Value& b);
bool SameRows(const std::vector<Tuple>& a, const std::vector<Tuple>& b, std::string* why = nullptr);

struct OracleAgg {
  AggFunc func = AggFunc::kCountStar;
  std::optional<size_t> column;
  DataType input_type = DataType::kInt64;
};

std::vector<OracleAgg> OracleAggs(const TableSchema& schema, const std::vector<AggSpec>& specs);
// One finalized row for `rows`.
Tuple OracleAggregate(const std::vector<Tuple>& rows, const std::vector<OracleAgg>& aggs);

// A table as a sorted map from pk to full row.
class OracleTable {
 public:
  explicit OracleTable(TableSchema schema);

  const TableSchema& schema() const { return schema_; }
  Tuple PkOf(const Tuple& row) const;

  // Each returns false (and leaves the table alone) exactly when the engine
  // must reject the operation.
  bool Insert(const Tuple& row);
  bool Update(const Tuple& pk, const std::vector<std::pair<size_t, Value>>& assignments);
  bool Delete(const Tuple& pk);

  bool Contains(const Tuple& pk) const { return rows_.count(pk) > 0; }
  size_t size() const { return rows_.size(); }
  std::vector<Tuple> Rows() const;
  std::vector<Tuple> Keys() const;

  std::vector<Tuple> Scan(const std::vector<Comparison>& preds, const std::vector<size_t>& projection) const;
  Tuple Aggregate(const std::vector<Comparison>& preds, const std::vector<AggSpec>& aggs) const;
  // (key, aggs...) ordered by key, NULL key first.
  std::vector<Tuple> GroupBy(const std::vector<Comparison>& preds, size_t column,
                             const std::vector<AggSpec>& aggs) const;

 private:
  TableSchema schema_;
  std::vector<size_t> pk_idx_;
  std::map<Tuple, Tuple, OracleLess> rows_;
};

// Random helpers over one std::mt19937_64.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}
  int64_t Int(int64_t lo, int64_t hi) { return std::uniform_int_distribution<int64_t>(lo, hi)(gen_); }
  bool Chance(double p) { return std::bernoulli_distribution(p)(gen_); }
  size_t Index(size_t n) { return static_cast<size_t>(Int(0, static_cast<int64_t>(n) - 1)); }
  std::mt19937_64& gen() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Values drawn from small domains so predicates, duplicates and group keys
// collide often. Floats are quarters, so sums stay exact in any order.
Value RandomValue(Rng& rng, DataType type, int64_t domain, double null_rate);
std::string RandomString(Rng& rng, int64_t domain);

// Comparison against `column` with a literal from the same domain.
Comparison RandomComparison(Rng& rng, const TableSchema& schema, size_t column, int64_t domain);

}  // namespace mercury::testing
