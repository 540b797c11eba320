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

#include "mercury/encoding/bit_packing.h"

#include <bit>
#include <cstring>

namespace mercury {

int BitWidth(uint64_t max_value) { return max_value == 0 ? 0 : 64 - std::countl_zero(max_value); }

void PackBits(std::span<const uint64_t> values, int width, std::vector<uint8_t>* out) {
  if (width == 0) return;
  size_t start = out->size();
  out->resize(start + PackedBytes(values.size(), width), 0);
  uint8_t* base = out->data() + start;
  uint64_t mask = width == 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1;
  size_t bit = 0;
  for (uint64_t v : values) {
    v &= mask;
    int remaining = width;
    while (remaining > 0) {
      size_t byte = bit >> 3;
      int offset = static_cast<int>(bit & 7);
      int take = std::min(remaining, 8 - offset);
      base[byte] |= static_cast<uint8_t>((v & ((uint64_t{1} << take) - 1)) << offset);
      v >>= take;
      remaining -= take;
      bit += static_cast<size_t>(take);
    }
  }
}

uint64_t UnpackOne(const uint8_t* packed, int width, size_t index) {
  if (width == 0) return 0;
  size_t bit = index * static_cast<size_t>(width);
  uint64_t v = 0;
  int got = 0;
  while (got < width) {
    size_t byte = bit >> 3;
    int offset = static_cast<int>(bit & 7);
    int take = std::min(width - got, 8 - offset);
    uint64_t part = (packed[byte] >> offset) & ((1u << take) - 1);
    v |= part << got;
    got += take;
    bit += static_cast<size_t>(take);
  }
  return v;
}

std::vector<uint64_t> UnpackBits(std::span<const uint8_t> packed, int width, size_t count) {
  std::vector<uint64_t> out(count, 0);
  if (width == 0) return out;
  for (size_t i = 0; i < count; ++i) out[i] = UnpackOne(packed.data(), width, i);
  return out;
}

}  // namespace mercury
