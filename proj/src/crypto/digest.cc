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

#include "evote/crypto/digest.h"

#include <sodium.h>

#include <algorithm>

#include "evote/common/error.h"

namespace evote::crypto {

Digest Digest::FromBytes(ByteView b) {
  if (b.size() != kDigestSize) throw Error(ErrorCode::kMalformed, "digest must be 32 bytes");
  Digest d;
  std::copy(b.begin(), b.end(), d.bytes.begin());
  return d;
}

Digest HashBytes(ByteView input) {
  Digest d;
  crypto_hash_sha256(d.bytes.data(), input.data(), input.size());
  return d;
}

}  // namespace evote::crypto
