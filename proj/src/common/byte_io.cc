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

#include "mercury/common/byte_io.h"

#include <zlib.h>

#include "mercury/common/error.h"

namespace mercury {

std::span<const uint8_t> ByteReader::GetBytes(size_t n) {
  Require(n);
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

void ByteReader::Seek(size_t pos) {
  if (pos > data_.size()) throw Error(ErrorCode::kCorruption, "seek past end of buffer");
  pos_ = pos;
}

void ByteReader::Require(size_t n) const {
  if (n > data_.size() - pos_) {
    throw Error(ErrorCode::kCorruption, "truncated buffer at offset " + std::to_string(pos_));
  }
}

uint32_t Crc32(std::span<const uint8_t> data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  return static_cast<uint32_t>(crc32(crc, data.data(), static_cast<uInt>(data.size())));
}

}  // namespace mercury
