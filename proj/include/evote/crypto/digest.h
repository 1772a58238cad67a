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

#ifndef EVOTE_CRYPTO_DIGEST_H_
#define EVOTE_CRYPTO_DIGEST_H_

#include <array>
#include <compare>
#include <cstdint>
#include <string>

#include "evote/common/bytes.h"

namespace evote::crypto {

inline constexpr std::size_t kDigestSize = 32;

// SHA-256 output.
struct Digest {
  std::array<std::uint8_t, kDigestSize> bytes{};

  ByteView view() const { return bytes; }
  std::string Hex() const { return HexEncode(bytes); }
  static Digest FromBytes(ByteView b);

  auto operator<=>(const Digest&) const = default;
};

Digest HashBytes(ByteView input);
inline Digest HashBytes(std::string_view s) { return HashBytes(AsBytes(s)); }

}  // namespace evote::crypto

#endif  // EVOTE_CRYPTO_DIGEST_H_
