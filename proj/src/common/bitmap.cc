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

#include "mercury/common/bitmap.h"

#include <bit>
#include <cassert>

namespace mercury {

Bitmap::Bitmap(size_t size, bool value) : size_(size), words_((size + 63) / 64, value ? ~uint64_t{0} : 0) {
  ClearTail();
}

Bitmap Bitmap::FromBools(std::span<const bool> bits) {
  Bitmap b(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) b.Set(i);
  }
  return b;
}

Bitmap Bitmap::FromBytes(std::span<const uint8_t> bytes, size_t size) {
  Bitmap b(size);
  for (size_t i = 0; i < size; ++i) {
    if ((bytes[i >> 3] >> (i & 7)) & 1) b.Set(i);
  }
  return b;
}

void Bitmap::Resize(size_t size, bool value) {
  size_t old = size_;
  size_ = size;
  words_.resize((size + 63) / 64, 0);
  if (value) {
    for (size_t i = old; i < size; ++i) Set(i);
  }
  ClearTail();
}

size_t Bitmap::CountSet() const {
  size_t n = 0;
  for (uint64_t w : words_) n += std::popcount(w);
  return n;
}

bool Bitmap::NoneSet() const {
  for (uint64_t w : words_) {
    if (w) return false;
  }
  return true;
}

Bitmap& Bitmap::operator&=(const Bitmap& other) {
  assert(size_ == other.size_);
  for (size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

Bitmap& Bitmap::operator|=(const Bitmap& other) {
  assert(size_ == other.size_);
  for (size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

Bitmap Bitmap::operator~() const {
  Bitmap out(*this);
  for (auto& w : out.words_) w = ~w;
  out.ClearTail();
  return out;
}

bool Bitmap::operator==(const Bitmap& other) const {
  return size_ == other.size_ && words_ == other.words_;
}

std::vector<uint8_t> Bitmap::ToBytes() const {
  std::vector<uint8_t> out((size_ + 7) / 8, 0);
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<uint8_t>(words_[i / 8] >> ((i % 8) * 8));
  }
  return out;
}

void Bitmap::ClearTail() {
  if (size_ % 64 != 0 && !words_.empty()) {
    words_.back() &= (uint64_t{1} << (size_ % 64)) - 1;
  }
}

}  // namespace mercury
