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

#include <limits>

#include "expect_error.h"
#include "mercury/encoding/bit_packing.h"
#include "mercury/encoding/encoding.h"
#include "oracle.h"

namespace mercury {
namespace {

using testing::OracleMatches;
using testing::RandomValue;
using testing::Rng;

ColumnBatch Batch(DataType type, const std::vector<Value>& v) { return ColumnBatch::FromValues(type, v); }

std::vector<Value> Ints(std::initializer_list<int64_t> xs) {
  std::vector<Value> v;
  for (auto x : xs) v.push_back(x);
  return v;
}

std::vector<Value> Strs(std::initializer_list<const char*> xs) {
  std::vector<Value> v;
  for (auto x : xs) v.push_back(std::string(x));
  return v;
}

TEST(BitPacking, RoundTripAllWidths) {
  Rng rng(10);
  for (int width = 0; width <= 64; ++width) {
    std::vector<uint64_t> vals(1 + rng.Index(200));
    for (auto& v : vals) v = width == 64 ? rng.gen()() : (width == 0 ? 0 : rng.gen()() & ((uint64_t{1} << width) - 1));
    std::vector<uint8_t> packed;
    PackBits(vals, width, &packed);
    EXPECT_EQ(packed.size(), PackedBytes(vals.size(), width));
    EXPECT_EQ(UnpackBits(packed, width, vals.size()), vals);
    for (size_t i = 0; i < vals.size(); i += 7) EXPECT_EQ(UnpackOne(packed.data(), width, i), vals[i]);
  }
  EXPECT_EQ(BitWidth(0), 0);
  EXPECT_EQ(BitWidth(1), 1);
  EXPECT_EQ(BitWidth(255), 8);
  EXPECT_EQ(BitWidth(256), 9);
  EXPECT_EQ(BitWidth(~uint64_t{0}), 64);
}

TEST(Encoding, DeltaRejections) {
  EXPECT_ERROR_CODE(EncodeDelta(Batch(DataType::kUtf8, Strs({"a"}))), ErrorCode::kTypeMismatch);
  auto wide = Ints({std::numeric_limits<int64_t>::min(), std::numeric_limits<int64_t>::max()});
  EXPECT_ERROR_CODE(EncodeDelta(Batch(DataType::kInt64, wide)), ErrorCode::kOverflow);
  auto edge = Ints({std::numeric_limits<int64_t>::max() - 3, std::numeric_limits<int64_t>::max()});
  auto blk = EncodeDelta(Batch(DataType::kInt64, edge));
  EXPECT_TRUE(SameValues(Decode(blk), Batch(DataType::kInt64, edge)));
}

TEST(Encoding, DictThreshold) {
  std::vector<Value> v;
  for (int64_t i = 0; i < 10; ++i) v.push_back(i);
  EXPECT_ERROR_CODE(EncodeDict(Batch(DataType::kInt64, v), 9), ErrorCode::kNdvTooHigh);
  auto blk = EncodeDict(Batch(DataType::kInt64, v), 10);
  EXPECT_EQ(blk.encoding_id, EncodingId::kDict);
  auto codes = DecodeDictCodes(blk);
  EXPECT_EQ(codes.dictionary.size(), 10u);
  EXPECT_EQ(codes.codes.size(), 10u);
}

TEST(Encoding, DictIsSortedSoCodesFollowValueOrder) {
  auto v = Strs({"pear", "apple", "fig", "apple", "pear"});
  auto codes = DecodeDictCodes(EncodeDict(Batch(DataType::kUtf8, v)));
  EXPECT_EQ(codes.dictionary.GetString(0), "apple");
  EXPECT_EQ(codes.dictionary.GetString(2), "pear");
  EXPECT_EQ(codes.codes, (std::vector<uint32_t>{2, 0, 1, 0, 2}));
}

TEST(Encoding, IntercolKinds) {
  std::vector<ColumnBatch> cols = {Batch(DataType::kUtf8, Strs({"ab", "c", ""})),
                                   Batch(DataType::kUtf8, Strs({"ab", "c", ""})),
                                   Batch(DataType::kUtf8, Strs({"abX", "cYY", "z"})),
                                   Batch(DataType::kUtf8, Strs({"zz", "c", ""}))};
  EXPECT_EQ(EncodeIntercol(cols, 1, 0).encoding_id, EncodingId::kIntercolEq);
  EXPECT_EQ(EncodeIntercol(cols, 2, 0).encoding_id, EncodingId::kIntercolSubstr);
  EXPECT_ERROR_CODE(EncodeIntercol(cols, 3, 0), ErrorCode::kNotApplicable);
  auto blk = EncodeIntercol(cols, 2, 0);
  EXPECT_EQ(IntercolSource(blk), 0);
  EXPECT_TRUE(SameValues(Decode(blk, [&](uint16_t c) { return cols[c]; }), cols[2]));
}

TEST(Encoding, ChooserPicksSmallestApplicable) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    auto type = static_cast<DataType>(trial % 3);
    std::vector<Value> a, b;
    size_t n = 1 + rng.Index(200);
    int64_t domain = trial % 2 ? 5 : 100000;
    for (size_t i = 0; i < n; ++i) a.push_back(RandomValue(rng, type, domain, 0.1));
    b = rng.Chance(0.3) ? a : std::vector<Value>();
    if (b.empty()) {
      for (size_t i = 0; i < n; ++i) b.push_back(RandomValue(rng, type, domain, 0.1));
    }
    std::vector<ColumnBatch> cols = {Batch(type, a), Batch(type, b)};
    EncodingOptions opts;
    auto chosen = EncodeBest(cols, 1, opts);
    EXPECT_EQ(chosen.encoding_id, ChooseEncoding(cols, 1, opts));
    // No applicable candidate is strictly smaller.
    std::vector<std::function<EncodedBlock()>> all = {
        [&] { return EncodePlain(cols[1]); }, [&] { return EncodeDelta(cols[1]); },
        [&] { return EncodeDict(cols[1], opts.dict_ndv_threshold); },
        [&] { return EncodePrefix(cols[1], opts.max_prefix_runs); }, [&] { return EncodeIntercol(cols, 1, 0); }};
    for (auto& fn : all) {
      try {
        auto blk = fn();
        EXPECT_LE(chosen.payload_size(), blk.payload_size()) << EncodingName(blk.encoding_id);
      } catch (const Error&) {
      }
    }
    EXPECT_TRUE(SameValues(Decode(chosen, [&](uint16_t c) { return cols[c]; }), cols[1]));
  }
}

TEST(Encoding, IntercolSourcesRespectFirstSource) {
  std::vector<ColumnBatch> cols = {Batch(DataType::kInt64, Ints({1, 2, 3})), Batch(DataType::kInt64, Ints({1, 2, 3}))};
  EncodingOptions opts;
  EXPECT_EQ(ChooseEncoding(cols, 1, opts), EncodingId::kIntercolEq);
  opts.intercol_first_source = 1;
  EXPECT_NE(ChooseEncoding(cols, 1, opts), EncodingId::kIntercolEq);
}

TEST(Encoding, PrefixSplitsIntoRuns) {
  std::vector<std::string> s;
  for (int i = 0; i < 50; ++i) s.push_back("alpha-common-prefix-" + std::to_string(i));
  for (int i = 0; i < 50; ++i) s.push_back("omega-another-prefix-" + std::to_string(i));
  auto b = ColumnBatch::FromStrings(s);
  auto one = EncodePrefix(b, 1);
  auto two = EncodePrefix(b, 4);
  EXPECT_LT(two.payload_size(), one.payload_size());
  EXPECT_TRUE(SameValues(Decode(two), b));
  EXPECT_EQ(Decode(two).format(), VectorFormat::kVarContinuous);
}

TEST(Encoding, PlainUtf8DecodesWithoutCopy) {
  auto blk = EncodePlain(Batch(DataType::kUtf8, Strs({"x", "yy"})));
  auto d = Decode(blk);
  EXPECT_EQ(d.format(), VectorFormat::kVarDiscrete);
  const uint8_t* lo = blk.payload->data();
  const uint8_t* hi = lo + blk.payload->size();
  EXPECT_TRUE(d.ptrs()[1] >= lo && d.ptrs()[1] < hi);
}

TEST(Encoding, EncodedEvalEdgeCases) {
  auto blk = EncodeDict(Batch(DataType::kInt64, Ints({5, 7, 5})));
  EXPECT_TRUE(EvalPredicateEncoded(blk, CompareOp::kNe, Value{}).NoneSet());
  EXPECT_ERROR_CODE(EvalPredicateEncoded(blk, CompareOp::kEq, Value{std::string("5")}), ErrorCode::kTypeMismatch);
  // Literal absent from the dictionary, between two entries.
  auto r = EvalPredicateEncoded(blk, CompareOp::kLt, Value{int64_t{6}});
  EXPECT_TRUE(r.Test(0));
  EXPECT_FALSE(r.Test(1));
  auto d = EncodeDelta(Batch(DataType::kInt64, Ints({100, 101, 102})));
  EXPECT_TRUE(EvalPredicateEncoded(d, CompareOp::kGt, Value{std::numeric_limits<int64_t>::min()}).AllSet());
  EXPECT_TRUE(EvalPredicateEncoded(d, CompareOp::kGe, Value{std::numeric_limits<int64_t>::max()}).NoneSet());
}

// Smaller version of the acceptance property over random data.
TEST(Encoding, RandomRoundTripAndEval) {
  Rng rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    auto type = static_cast<DataType>(trial % 3);
    std::vector<Value> v;
    size_t n = 1 + rng.Index(100);
    for (size_t i = 0; i < n; ++i) v.push_back(RandomValue(rng, type, trial % 5 == 0 ? 3 : 500, 0.15));
    std::vector<ColumnBatch> cols = {Batch(type, v)};
    auto blk = EncodeBest(cols, 0);
    ASSERT_TRUE(SameValues(Decode(blk), cols[0])) << EncodingName(blk.encoding_id);
    Value lit = RandomValue(rng, type, 500, 0);
    for (int op = 0; op < 6; ++op) {
      auto got = EvalPredicateEncoded(blk, static_cast<CompareOp>(op), lit);
      for (size_t i = 0; i < n; ++i) ASSERT_EQ(got.Test(i), OracleMatches(v[i], static_cast<CompareOp>(op), lit));
    }
  }
}

}  // namespace
}  // namespace mercury
