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

#include "evote/crypto/erase.h"

#include <sodium.h>

namespace evote::crypto {

void SecureErase(std::span<std::uint8_t> region) {
  if (region.empty()) return;
  randombytes_buf(region.data(), region.size());
  // Keep the stores observable.
  __asm__ __volatile__("" : : "r"(region.data()) : "memory");
}

}  // namespace evote::crypto
