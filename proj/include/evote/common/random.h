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

#ifndef EVOTE_COMMON_RANDOM_H_
#define EVOTE_COMMON_RANDOM_H_

#include <cstdint>
#include <mutex>
#include <span>

#include "evote/common/bytes.h"

namespace evote {

class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void Fill(std::span<std::uint8_t> out) = 0;

  Bytes Generate(std::size_t n);
  std::uint64_t NextU64();
  // Uniform in [0, bound) by rejection sampling. bound > 0.
  std::uint64_t Uniform(std::uint64_t bound);
};

// OS entropy via libsodium.
class SystemRandom final : public RandomSource {
 public:
  void Fill(std::span<std::uint8_t> out) override;
};

// ChaCha20 keystream keyed from a 64-bit seed. Deterministic, thread-safe.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed);
  void Fill(std::span<std::uint8_t> out) override;

 private:
  std::mutex mu_;
  std::uint8_t key_[32];
  std::uint64_t block_ = 0;
};

SystemRandom& DefaultRandom();

}  // namespace evote

#endif  // EVOTE_COMMON_RANDOM_H_
