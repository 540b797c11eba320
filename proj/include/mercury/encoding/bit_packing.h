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

#include <cstdint>
#include <span>
#include <vector>

namespace mercury {

// Minimal number of bits able to represent `max_value` (0 for 0).
int BitWidth(uint64_t max_value);

// LSB-first packing of `values`, each truncated to `width` bits (0..64).
void PackBits(std::span<const uint64_t> values, int width, std::vector<uint8_t>* out);
inline size_t PackedBytes(size_t count, int width) { return (count * static_cast<size_t>(width) + 7) / 8; }

// Random access into a packed run.
uint64_t UnpackOne(const uint8_t* packed, int width, size_t index);
std::vector<uint64_t> UnpackBits(std::span<const uint8_t> packed, int width, size_t count);

}  // namespace mercury
