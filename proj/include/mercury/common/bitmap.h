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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mercury {

// Packed bitset used for null masks and selection vectors.
class Bitmap {
 public:
  Bitmap() = default;
  explicit Bitmap(size_t size, bool value = false);

  static Bitmap FromBools(std::span<const bool> bits);
  static Bitmap FromBytes(std::span<const uint8_t> bytes, size_t size);

  size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool Test(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  void Set(size_t i, bool value = true) {
    uint64_t mask = uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void Resize(size_t size, bool value = false);

  size_t CountSet() const;
  bool AllSet() const { return CountSet() == size_; }
  bool NoneSet() const;

  Bitmap& operator&=(const Bitmap& other);
  Bitmap& operator|=(const Bitmap& other);
  Bitmap operator~() const;
  bool operator==(const Bitmap& other) const;

  // Little-endian byte image, ceil(size/8) bytes.
  std::vector<uint8_t> ToBytes() const;
  const std::vector<uint64_t>& words() const { return words_; }

 private:
  void ClearTail();

  size_t size_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace mercury
