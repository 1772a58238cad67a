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

#ifndef EVOTE_CRYPTO_ERASE_H_
#define EVOTE_CRYPTO_ERASE_H_

#include <cstdint>
#include <span>

namespace evote::crypto {

// Overwrites the region with pseudorandom bytes. Application-level only:
// copies made by the allocator, swap or core dumps are out of reach.
void SecureErase(std::span<std::uint8_t> region);

}  // namespace evote::crypto

#endif  // EVOTE_CRYPTO_ERASE_H_
