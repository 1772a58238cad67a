// Copyright 2026 The evote Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evote/common/random.h"

#include <sodium.h>

#include <cstring>

#include "evote/common/error.h"

namespace evote {

Bytes RandomSource::Generate(std::size_t n) {
  Bytes out(n);
  Fill(out);
  return out;
}

std::uint64_t RandomSource::NextU64() {
  std::uint8_t buf[8];
  Fill(buf);
  std::uint64_t v = 0;
  for (auto b : buf) v = (v << 8) | b;
  return v;
}

std::uint64_t RandomSource::Uniform(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "zero bound");
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  for (;;) {
    std::uint64_t v = NextU64();
    if (v < limit) return v % bound;
  }
}

void SystemRandom::Fill(std::span<std::uint8_t> out) {
  if (sodium_init() < 0) throw Error(ErrorCode::kEntropy, "sodium_init failed");
  randombytes_buf(out.data(), out.size());
}

SeededRandom::SeededRandom(std::uint64_t seed) {
  if (sodium_init() < 0) throw Error(ErrorCode::kEntropy, "sodium_init failed");
  std::uint8_t material[16] = {'e', 'v', 'o', 't', 'e', '-', 'r', 'n', 'g'};
  for (int i = 0; i < 8; ++i) material[8 + i] ^= static_cast<std::uint8_t>(seed >> (8 * i));
  crypto_hash_sha256(key_, material, sizeof(material));
}

void SeededRandom::Fill(std::span<std::uint8_t> out) {
  std::lock_guard lock(mu_);
  std::uint8_t nonce[crypto_stream_chacha20_NONCEBYTES] = {};
  std::uint64_t b = block_++;
  std::memcpy(nonce, &b, sizeof(b));
  crypto_stream_chacha20(out.data(), out.size(), nonce, key_);
}

SystemRandom& DefaultRandom() {
  static SystemRandom instance;
  return instance;
}

}  // namespace evote
