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

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mercury {

// Little-endian append-only buffer.
class ByteWriter {
 public:
  void PutU8(uint8_t v) { buf_.push_back(v); }
  void PutU16(uint16_t v) { PutRaw(v); }
  void PutU32(uint32_t v) { PutRaw(v); }
  void PutU64(uint64_t v) { PutRaw(v); }
  void PutI64(int64_t v) { PutRaw(static_cast<uint64_t>(v)); }
  void PutF64(double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    PutRaw(bits);
  }
  void PutBytes(std::span<const uint8_t> bytes) { buf_.insert(buf_.end(), bytes.begin(), bytes.end()); }
  void PutBytes(std::string_view bytes) { buf_.insert(buf_.end(), bytes.begin(), bytes.end()); }
  // u32 length followed by the bytes.
  void PutString(std::string_view s) {
    PutU32(static_cast<uint32_t>(s.size()));
    PutBytes(s);
  }
  void PatchU32(size_t pos, uint32_t v) { std::memcpy(buf_.data() + pos, &v, sizeof v); }

  size_t size() const { return buf_.size(); }
  const std::vector<uint8_t>& data() const { return buf_; }
  std::vector<uint8_t> Release() { return std::move(buf_); }

 private:
  template <typename T>
  void PutRaw(T v) {
    static_assert(std::endian::native == std::endian::little);
    size_t pos = buf_.size();
    buf_.resize(pos + sizeof(T));
    std::memcpy(buf_.data() + pos, &v, sizeof(T));
  }

  std::vector<uint8_t> buf_;
};

// Bounds-checked reader; throws Error(kCorruption) on overrun.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  uint8_t GetU8() { return GetRaw<uint8_t>(); }
  uint16_t GetU16() { return GetRaw<uint16_t>(); }
  uint32_t GetU32() { return GetRaw<uint32_t>(); }
  uint64_t GetU64() { return GetRaw<uint64_t>(); }
  int64_t GetI64() { return static_cast<int64_t>(GetRaw<uint64_t>()); }
  double GetF64() {
    uint64_t bits = GetRaw<uint64_t>();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  std::span<const uint8_t> GetBytes(size_t n);
  std::string_view GetStringView() {
    uint32_t n = GetU32();
    auto bytes = GetBytes(n);
    return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
  }

  size_t position() const { return pos_; }
  size_t remaining() const { return data_.size() - pos_; }
  void Seek(size_t pos);

 private:
  void Require(size_t n) const;

  template <typename T>
  T GetRaw() {
    Require(sizeof(T));
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

uint32_t Crc32(std::span<const uint8_t> data);

}  // namespace mercury
