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

#include "mercury/encoding/encoding.h"

#include <algorithm>
#include <cstring>
#include <limits>

#include "mercury/common/byte_io.h"
#include "mercury/common/error.h"
#include "mercury/encoding/bit_packing.h"
#include "mercury/skipindex/index_tree.h"
#include "mercury/vectors/kernels.h"

namespace mercury {

std::string_view EncodingName(EncodingId id) {
  switch (id) {
    case EncodingId::kPlain: return "plain";
    case EncodingId::kDelta: return "delta";
    case EncodingId::kDict: return "dict";
    case EncodingId::kPrefix: return "prefix";
    case EncodingId::kIntercolEq: return "intercol_eq";
    case EncodingId::kIntercolSubstr: return "intercol_substr";
  }
  return "?";
}

namespace {

EncodedBlock MakeBlock(EncodingId id, const ColumnBatch& values, ByteWriter&& payload) {
  EncodedBlock b;
  b.encoding_id = id;
  b.type = values.type();
  b.row_count = static_cast<uint32_t>(values.size());
  b.null_bitmap = values.flags().has_null ? values.nulls() : Bitmap(values.size());
  b.payload = std::make_shared<const std::vector<uint8_t>>(payload.Release());
  b.stats = SketchOf(values);
  return b;
}

void PutPlainValue(const ColumnBatch& values, size_t i, ByteWriter* w) {
  switch (values.type()) {
    case DataType::kInt64: w->PutI64(values.IsNull(i) ? 0 : values.GetInt64(i)); break;
    case DataType::kFloat64: w->PutF64(values.IsNull(i) ? 0.0 : values.GetFloat64(i)); break;
    case DataType::kUtf8: w->PutString(values.IsNull(i) ? std::string_view() : values.GetString(i)); break;
  }
}

void PutPlainValue(const Value& v, DataType type, ByteWriter* w) {
  switch (type) {
    case DataType::kInt64: w->PutI64(std::get<int64_t>(v)); break;
    case DataType::kFloat64: w->PutF64(std::get<double>(v)); break;
    case DataType::kUtf8: w->PutString(std::get<std::string>(v)); break;
  }
}

void RequireType(const ColumnBatch& values, DataType type, const char* encoding) {
  if (values.type() != type) {
    throw Error(ErrorCode::kTypeMismatch, std::string(encoding) + " encoding does not apply to " +
                                              std::string(DataTypeName(values.type())));
  }
}

std::vector<Value> SortedDistinct(const ColumnBatch& values) {
  std::vector<Value> distinct;
  distinct.reserve(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    if (!values.IsNull(i)) distinct.push_back(values.GetValue(i));
  }
  std::sort(distinct.begin(), distinct.end(), [](const Value& a, const Value& b) { return CompareValues(a, b) < 0; });
  distinct.erase(std::unique(distinct.begin(), distinct.end(),
                             [](const Value& a, const Value& b) { return CompareValues(a, b) == 0; }),
                 distinct.end());
  return distinct;
}

size_t CommonPrefix(std::string_view a, std::string_view b) {
  size_t n = std::min(a.size(), b.size());
  size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

struct PrefixRun {
  size_t begin = 0;
  size_t end = 0;
  size_t prefix_len = 0;
  size_t non_null = 0;

  // Run-dependent part of the payload size: header minus bytes saved on suffixes.
  int64_t Cost() const {
    return 8 + static_cast<int64_t>(prefix_len) - static_cast<int64_t>(prefix_len * non_null);
  }
};

PrefixRun MakeRun(const ColumnBatch& values, size_t begin, size_t end) {
  PrefixRun run{begin, end, 0, 0};
  std::string_view first;
  for (size_t i = begin; i < end; ++i) {
    if (values.IsNull(i)) continue;
    auto v = values.GetString(i);
    if (run.non_null == 0) {
      first = v;
      run.prefix_len = v.size();
    } else {
      run.prefix_len = std::min(run.prefix_len, CommonPrefix(first, v));
    }
    ++run.non_null;
  }
  return run;
}

// Best split of `run` into two contiguous runs; returns nullopt if no split helps.
std::optional<std::pair<PrefixRun, PrefixRun>> BestSplit(const ColumnBatch& values, const PrefixRun& run) {
  size_t n = run.end - run.begin;
  if (n < 2) return std::nullopt;
  // fwd[k]: run over [begin, begin + k); bwd[k]: run over [begin + k, end).
  std::vector<PrefixRun> fwd(n + 1), bwd(n + 1);
  {
    PrefixRun acc{run.begin, run.begin, 0, 0};
    std::string_view first;
    fwd[0] = acc;
    for (size_t k = 0; k < n; ++k) {
      size_t i = run.begin + k;
      if (!values.IsNull(i)) {
        auto v = values.GetString(i);
        if (acc.non_null == 0) {
          first = v;
          acc.prefix_len = v.size();
        } else {
          acc.prefix_len = std::min(acc.prefix_len, CommonPrefix(first, v));
        }
        ++acc.non_null;
      }
      acc.end = i + 1;
      fwd[k + 1] = acc;
    }
  }
  {
    PrefixRun acc{run.end, run.end, 0, 0};
    std::string_view first;
    bwd[n] = acc;
    for (size_t k = n; k-- > 0;) {
      size_t i = run.begin + k;
      if (!values.IsNull(i)) {
        auto v = values.GetString(i);
        if (acc.non_null == 0) {
          first = v;
          acc.prefix_len = v.size();
        } else {
          acc.prefix_len = std::min(acc.prefix_len, CommonPrefix(first, v));
        }
        ++acc.non_null;
      }
      acc.begin = i;
      bwd[k] = acc;
    }
  }
  int64_t best = run.Cost();
  std::optional<std::pair<PrefixRun, PrefixRun>> out;
  for (size_t k = 1; k < n; ++k) {
    int64_t cost = fwd[k].Cost() + bwd[k].Cost();
    if (cost < best) {
      best = cost;
      out = std::make_pair(fwd[k], bwd[k]);
    }
  }
  return out;
}

}  // namespace

EncodedBlock EncodePlain(const ColumnBatch& values) {
  ByteWriter w;
  for (size_t i = 0; i < values.size(); ++i) PutPlainValue(values, i, &w);
  return MakeBlock(EncodingId::kPlain, values, std::move(w));
}

EncodedBlock EncodeDelta(const ColumnBatch& values) {
  RequireType(values, DataType::kInt64, "delta");
  bool any = false;
  int64_t lo = 0, hi = 0;
  for (size_t i = 0; i < values.size(); ++i) {
    if (values.IsNull(i)) continue;
    int64_t v = values.GetInt64(i);
    if (!any) {
      lo = hi = v;
      any = true;
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  uint64_t range = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo);
  if (range > static_cast<uint64_t>(std::numeric_limits<int64_t>::max())) {
    throw Error(ErrorCode::kOverflow, "delta range " + std::to_string(lo) + ".." + std::to_string(hi) +
                                          " needs 64 bits");
  }
  int width = BitWidth(range);
  std::vector<uint64_t> deltas(values.size(), 0);
  for (size_t i = 0; i < values.size(); ++i) {
    if (!values.IsNull(i)) deltas[i] = static_cast<uint64_t>(values.GetInt64(i)) - static_cast<uint64_t>(lo);
  }
  ByteWriter w;
  w.PutI64(lo);
  w.PutU8(static_cast<uint8_t>(width));
  std::vector<uint8_t> packed;
  PackBits(deltas, width, &packed);
  w.PutBytes(packed);
  return MakeBlock(EncodingId::kDelta, values, std::move(w));
}

EncodedBlock EncodeDict(const ColumnBatch& values, uint32_t ndv_threshold) {
  auto dict = SortedDistinct(values);
  if (dict.size() > ndv_threshold) {
    throw Error(ErrorCode::kNdvTooHigh, std::to_string(dict.size()) + " distinct values exceed threshold " +
                                            std::to_string(ndv_threshold));
  }
  int width = dict.size() <= 1 ? 0 : BitWidth(dict.size() - 1);
  std::vector<uint64_t> codes(values.size(), 0);
  for (size_t i = 0; i < values.size(); ++i) {
    if (values.IsNull(i)) continue;
    Value v = values.GetValue(i);
    auto it = std::lower_bound(dict.begin(), dict.end(), v,
                               [](const Value& a, const Value& b) { return CompareValues(a, b) < 0; });
    codes[i] = static_cast<uint64_t>(it - dict.begin());
  }
  ByteWriter w;
  w.PutU32(static_cast<uint32_t>(dict.size()));
  w.PutU8(static_cast<uint8_t>(width));
  for (const auto& v : dict) PutPlainValue(v, values.type(), &w);
  std::vector<uint8_t> packed;
  PackBits(codes, width, &packed);
  w.PutBytes(packed);
  return MakeBlock(EncodingId::kDict, values, std::move(w));
}

EncodedBlock EncodePrefix(const ColumnBatch& values, int max_runs) {
  RequireType(values, DataType::kUtf8, "prefix");
  std::vector<PrefixRun> runs{MakeRun(values, 0, values.size())};
  while (static_cast<int>(runs.size()) < max_runs) {
    int64_t best_gain = 0;
    size_t best_run = 0;
    std::optional<std::pair<PrefixRun, PrefixRun>> best_split;
    for (size_t r = 0; r < runs.size(); ++r) {
      auto split = BestSplit(values, runs[r]);
      if (!split) continue;
      int64_t gain = runs[r].Cost() - split->first.Cost() - split->second.Cost();
      if (gain > best_gain) {
        best_gain = gain;
        best_run = r;
        best_split = split;
      }
    }
    if (!best_split) break;
    runs[best_run] = best_split->first;
    runs.insert(runs.begin() + static_cast<ptrdiff_t>(best_run) + 1, best_split->second);
  }

  ByteWriter w;
  w.PutU8(static_cast<uint8_t>(runs.size()));
  std::vector<std::string_view> prefixes;
  for (const auto& run : runs) {
    std::string_view prefix;
    for (size_t i = run.begin; i < run.end; ++i) {
      if (!values.IsNull(i)) {
        prefix = values.GetString(i).substr(0, run.prefix_len);
        break;
      }
    }
    w.PutU32(static_cast<uint32_t>(run.end - run.begin));
    w.PutString(prefix);
    prefixes.push_back(prefix);
  }
  for (size_t r = 0; r < runs.size(); ++r) {
    for (size_t i = runs[r].begin; i < runs[r].end; ++i) {
      w.PutString(values.IsNull(i) ? std::string_view() : values.GetString(i).substr(prefixes[r].size()));
    }
  }
  return MakeBlock(EncodingId::kPrefix, values, std::move(w));
}

EncodedBlock EncodeIntercol(std::span<const ColumnBatch> block_cols, size_t target, size_t source) {
  if (target >= block_cols.size() || source >= block_cols.size() || target == source) {
    throw Error(ErrorCode::kInvalidArgument, "bad inter-column pair");
  }
  const ColumnBatch& t = block_cols[target];
  const ColumnBatch& s = block_cols[source];
  if (t.size() != s.size()) throw Error(ErrorCode::kLengthMismatch, "inter-column block lengths differ");
  bool equal = t.type() == s.type();
  bool prefix = t.type() == DataType::kUtf8 && s.type() == DataType::kUtf8;
  for (size_t i = 0; i < t.size() && (equal || prefix); ++i) {
    bool tn = t.IsNull(i), sn = s.IsNull(i);
    if (tn || sn) {
      equal = equal && tn == sn;
      prefix = prefix && tn == sn;
      continue;
    }
    auto tv = t.GetBytes(i);
    auto sv = s.GetBytes(i);
    equal = equal && tv == sv;
    prefix = prefix && tv.substr(0, sv.size()) == sv;
  }
  ByteWriter w;
  w.PutU16(static_cast<uint16_t>(source));
  if (equal) return MakeBlock(EncodingId::kIntercolEq, t, std::move(w));
  if (!prefix) {
    throw Error(ErrorCode::kNotApplicable, "column " + std::to_string(source) + " is not a row-wise prefix of column " +
                                               std::to_string(target));
  }
  for (size_t i = 0; i < t.size(); ++i) {
    w.PutString(t.IsNull(i) ? std::string_view() : t.GetString(i).substr(s.GetString(i).size()));
  }
  return MakeBlock(EncodingId::kIntercolSubstr, t, std::move(w));
}

namespace {

// Every applicable candidate, in enum order.
std::vector<EncodedBlock> Candidates(std::span<const ColumnBatch> block_cols, size_t column,
                                     const EncodingOptions& options) {
  const ColumnBatch& values = block_cols[column];
  std::vector<EncodedBlock> out;
  out.push_back(EncodePlain(values));
  auto attempt = [&](auto&& fn) {
    try {
      out.push_back(fn());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kOverflow && e.code() != ErrorCode::kNdvTooHigh &&
          e.code() != ErrorCode::kNotApplicable && e.code() != ErrorCode::kTypeMismatch) {
        throw;
      }
    }
  };
  if (values.type() == DataType::kInt64) attempt([&] { return EncodeDelta(values); });
  attempt([&] { return EncodeDict(values, options.dict_ndv_threshold); });
  if (values.type() == DataType::kUtf8) attempt([&] { return EncodePrefix(values, options.max_prefix_runs); });
  std::optional<EncodedBlock> eq, substr;
  for (size_t src = options.intercol_first_source; src < column && !(eq && substr); ++src) {
    if (block_cols[src].type() != values.type()) continue;
    try {
      EncodedBlock b = EncodeIntercol(block_cols, column, src);
      if (b.encoding_id == EncodingId::kIntercolEq) {
        if (!eq) eq = std::move(b);
      } else if (!substr) {
        substr = std::move(b);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNotApplicable) throw;
    }
  }
  if (eq) out.push_back(std::move(*eq));
  if (substr) out.push_back(std::move(*substr));
  return out;
}

size_t PickSmallest(const std::vector<EncodedBlock>& candidates) {
  size_t best = 0;
  for (size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i].payload_size() < candidates[best].payload_size()) best = i;
  }
  return best;
}

}  // namespace

EncodingId ChooseEncoding(std::span<const ColumnBatch> block_cols, size_t column, const EncodingOptions& options) {
  auto candidates = Candidates(block_cols, column, options);
  return candidates[PickSmallest(candidates)].encoding_id;
}

EncodedBlock EncodeBest(std::span<const ColumnBatch> block_cols, size_t column, const EncodingOptions& options) {
  auto candidates = Candidates(block_cols, column, options);
  return std::move(candidates[PickSmallest(candidates)]);
}

std::optional<uint16_t> IntercolSource(const EncodedBlock& block) {
  if (block.encoding_id != EncodingId::kIntercolEq && block.encoding_id != EncodingId::kIntercolSubstr) {
    return std::nullopt;
  }
  ByteReader r(block.payload_bytes());
  return r.GetU16();
}

namespace {

ColumnBatch FixedFromWords(DataType type, std::vector<uint64_t> words, const Bitmap& nulls) {
  auto buf = std::make_shared<std::vector<uint8_t>>(words.size() * 8);
  if (!words.empty()) std::memcpy(buf->data(), words.data(), buf->size());
  return ColumnBatch::MakeFixedLen(type, std::move(buf), words.size(), nulls);
}

// Positions of the dictionary entries inside the payload.
struct DictLayout {
  uint32_t ndv = 0;
  int width = 0;
  std::vector<const uint8_t*> ptrs;
  std::vector<uint32_t> lens;
  const uint8_t* codes = nullptr;
};

DictLayout ReadDictLayout(const EncodedBlock& block) {
  ByteReader r(block.payload_bytes());
  DictLayout d;
  d.ndv = r.GetU32();
  d.width = r.GetU8();
  for (uint32_t i = 0; i < d.ndv; ++i) {
    if (block.type == DataType::kUtf8) {
      auto s = r.GetStringView();
      d.ptrs.push_back(reinterpret_cast<const uint8_t*>(s.data()));
      d.lens.push_back(static_cast<uint32_t>(s.size()));
    } else {
      d.ptrs.push_back(r.GetBytes(8).data());
      d.lens.push_back(8);
    }
  }
  auto packed = r.GetBytes(PackedBytes(block.row_count, d.width));
  d.codes = packed.data();
  return d;
}

ColumnBatch ResolveSource(const EncodedBlock& block, const SourceResolver& sources) {
  if (!sources) throw Error(ErrorCode::kInvalidArgument, "inter-column block decoded without its source column");
  ColumnBatch src = sources(*IntercolSource(block));
  if (src.size() != block.row_count) throw Error(ErrorCode::kCorruption, "inter-column source length");
  return src;
}

}  // namespace

ColumnBatch Decode(const EncodedBlock& block, const SourceResolver& sources) {
  const size_t n = block.row_count;
  ByteReader r(block.payload_bytes());
  switch (block.encoding_id) {
    case EncodingId::kPlain: {
      if (block.type != DataType::kUtf8) {
        if (block.payload_size() != n * 8) throw Error(ErrorCode::kCorruption, "plain fixed payload size");
        // Zero-copy: the payload already is the fixed-length layout.
        return ColumnBatch::MakeFixedLen(block.type, block.payload, n, block.null_bitmap);
      }
      std::vector<const uint8_t*> ptrs(n);
      std::vector<uint32_t> lens(n);
      for (size_t i = 0; i < n; ++i) {
        auto s = r.GetStringView();
        ptrs[i] = reinterpret_cast<const uint8_t*>(s.data());
        lens[i] = static_cast<uint32_t>(s.size());
      }
      return ColumnBatch::MakeVarDiscrete(block.type, std::move(ptrs), std::move(lens), block.null_bitmap,
                                          block.payload);
    }
    case EncodingId::kDelta: {
      int64_t min = r.GetI64();
      int width = r.GetU8();
      auto packed = r.GetBytes(PackedBytes(n, width));
      auto deltas = UnpackBits(packed, width, n);
      for (size_t i = 0; i < n; ++i) {
        deltas[i] = block.null_bitmap.Test(i) ? 0 : deltas[i] + static_cast<uint64_t>(min);
      }
      return FixedFromWords(DataType::kInt64, std::move(deltas), block.null_bitmap);
    }
    case EncodingId::kDict: {
      DictLayout d = ReadDictLayout(block);
      std::vector<const uint8_t*> ptrs(n);
      std::vector<uint32_t> lens(n);
      static const uint8_t kZero[8] = {};
      for (size_t i = 0; i < n; ++i) {
        if (block.null_bitmap.Test(i)) {
          ptrs[i] = kZero;
          lens[i] = block.type == DataType::kUtf8 ? 0 : 8;
          continue;
        }
        uint64_t code = UnpackOne(d.codes, d.width, i);
        if (code >= d.ndv) throw Error(ErrorCode::kCorruption, "dictionary code out of range");
        ptrs[i] = d.ptrs[code];
        lens[i] = d.lens[code];
      }
      auto batch = ColumnBatch::MakeVarDiscrete(block.type, std::move(ptrs), std::move(lens), block.null_bitmap,
                                                block.payload);
      return block.type == DataType::kUtf8 ? batch : Convert(batch, VectorFormat::kFixedLen);
    }
    case EncodingId::kPrefix: {
      uint8_t run_count = r.GetU8();
      std::vector<std::pair<uint32_t, std::string_view>> runs;
      for (uint8_t i = 0; i < run_count; ++i) {
        uint32_t rows = r.GetU32();
        runs.emplace_back(rows, r.GetStringView());
      }
      auto buf = std::make_shared<std::vector<uint8_t>>();
      std::vector<uint32_t> offsets{0};
      offsets.reserve(n + 1);
      size_t row = 0;
      for (const auto& [rows, prefix] : runs) {
        for (uint32_t k = 0; k < rows; ++k, ++row) {
          auto suffix = r.GetStringView();
          if (!block.null_bitmap.Test(row)) {
            buf->insert(buf->end(), prefix.begin(), prefix.end());
            buf->insert(buf->end(), suffix.begin(), suffix.end());
          }
          offsets.push_back(static_cast<uint32_t>(buf->size()));
        }
      }
      if (row != n) throw Error(ErrorCode::kCorruption, "prefix runs do not cover the block");
      return ColumnBatch::MakeVarContinuous(DataType::kUtf8, std::move(buf), std::move(offsets), block.null_bitmap);
    }
    case EncodingId::kIntercolEq: {
      ColumnBatch src = ResolveSource(block, sources);
      src.mutable_flags().all_active = true;
      src.mutable_flags().selection.reset();
      return src;
    }
    case EncodingId::kIntercolSubstr: {
      ColumnBatch src = ResolveSource(block, sources);
      r.GetU16();
      auto buf = std::make_shared<std::vector<uint8_t>>();
      std::vector<uint32_t> offsets{0};
      offsets.reserve(n + 1);
      for (size_t i = 0; i < n; ++i) {
        auto suffix = r.GetStringView();
        if (!block.null_bitmap.Test(i)) {
          auto head = src.GetString(i);
          buf->insert(buf->end(), head.begin(), head.end());
          buf->insert(buf->end(), suffix.begin(), suffix.end());
        }
        offsets.push_back(static_cast<uint32_t>(buf->size()));
      }
      return ColumnBatch::MakeVarContinuous(DataType::kUtf8, std::move(buf), std::move(offsets), block.null_bitmap);
    }
  }
  throw Error(ErrorCode::kCorruption, "unknown encoding id");
}

DictCodes DecodeDictCodes(const EncodedBlock& block) {
  if (block.encoding_id != EncodingId::kDict) throw Error(ErrorCode::kInvalidArgument, "block is not dictionary-coded");
  DictLayout d = ReadDictLayout(block);
  DictCodes out;
  out.dictionary = ColumnBatch::MakeVarDiscrete(block.type, d.ptrs, d.lens, Bitmap(d.ndv), block.payload);
  if (block.type != DataType::kUtf8) out.dictionary = Convert(out.dictionary, VectorFormat::kFixedLen);
  out.codes.resize(block.row_count);
  for (size_t i = 0; i < block.row_count; ++i) {
    out.codes[i] = static_cast<uint32_t>(UnpackOne(d.codes, d.width, i));
  }
  return out;
}

namespace {

bool CodeMatches(CompareOp op, uint64_t code, uint64_t pos, bool found) {
  switch (op) {
    case CompareOp::kEq: return found && code == pos;
    case CompareOp::kNe: return !found || code != pos;
    case CompareOp::kLt: return code < pos;
    case CompareOp::kLe: return code < pos + (found ? 1 : 0);
    case CompareOp::kGt: return code >= pos + (found ? 1 : 0);
    case CompareOp::kGe: return code >= pos;
  }
  return false;
}

Bitmap EvalDict(const EncodedBlock& block, CompareOp op, const Value& literal) {
  DictLayout d = ReadDictLayout(block);
  // Binary search of the literal among the sorted dictionary entries.
  auto entry = [&](size_t k) -> Value {
    switch (block.type) {
      case DataType::kInt64: {
        int64_t v;
        std::memcpy(&v, d.ptrs[k], 8);
        return v;
      }
      case DataType::kFloat64: {
        double v;
        std::memcpy(&v, d.ptrs[k], 8);
        return v;
      }
      case DataType::kUtf8: return std::string(reinterpret_cast<const char*>(d.ptrs[k]), d.lens[k]);
    }
    return std::monostate{};
  };
  size_t lo = 0, hi = d.ndv;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (CompareValues(entry(mid), literal) < 0) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  bool found = lo < d.ndv && CompareValues(entry(lo), literal) == 0;
  Bitmap out(block.row_count);
  for (size_t i = 0; i < block.row_count; ++i) {
    if (block.null_bitmap.Test(i)) continue;
    if (CodeMatches(op, UnpackOne(d.codes, d.width, i), lo, found)) out.Set(i);
  }
  return out;
}

Bitmap EvalDelta(const EncodedBlock& block, CompareOp op, int64_t literal) {
  ByteReader r(block.payload_bytes());
  int64_t min = r.GetI64();
  int width = r.GetU8();
  const uint8_t* packed = r.GetBytes(PackedBytes(block.row_count, width)).data();
  Bitmap out(block.row_count);
  if (literal < min) {
    // Every non-null value lies above the literal.
    bool match = op == CompareOp::kNe || op == CompareOp::kGt || op == CompareOp::kGe;
    if (match) out = ~block.null_bitmap;
    return out;
  }
  uint64_t rebased = static_cast<uint64_t>(literal) - static_cast<uint64_t>(min);
  for (size_t i = 0; i < block.row_count; ++i) {
    if (block.null_bitmap.Test(i)) continue;
    uint64_t delta = UnpackOne(packed, width, i);
    if (ApplyCompare(op, delta < rebased ? -1 : (delta > rebased ? 1 : 0))) out.Set(i);
  }
  return out;
}

}  // namespace

Bitmap EvalPredicateEncoded(const EncodedBlock& block, CompareOp op, const Value& literal,
                            const SourceResolver& sources) {
  if (IsNull(literal)) return Bitmap(block.row_count);
  bool literal_is_string = std::holds_alternative<std::string>(literal);
  if (literal_is_string != (block.type == DataType::kUtf8)) {
    throw Error(ErrorCode::kTypeMismatch, "literal " + ValueToString(literal) + " against " +
                                              std::string(DataTypeName(block.type)) + " column");
  }
  switch (ClassifySketch(block.stats, op, literal)) {
    case BlockClass::kNoneMatch: return Bitmap(block.row_count);
    case BlockClass::kAllMatch: return Bitmap(block.row_count, true);
    case BlockClass::kMaybe: break;
  }
  if (block.encoding_id == EncodingId::kDict) return EvalDict(block, op, literal);
  if (block.encoding_id == EncodingId::kDelta && std::holds_alternative<int64_t>(literal)) {
    return EvalDelta(block, op, std::get<int64_t>(literal));
  }
  return EvaluateComparison(Decode(block, sources), op, literal);
}

}  // namespace mercury
