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

#ifndef EVOTE_CRYPTO_SEAL_H_
#define EVOTE_CRYPTO_SEAL_H_

#include <string>

#include "evote/common/bytes.h"
#include "evote/crypto/keys.h"

namespace evote::crypto {

// Hybrid public-key encryption: a fresh 32-byte data key is sealed to the
// recipient's X25519 key and the payload is encrypted under it with
// XChaCha20-Poly1305. The recipient key id is bound as associated data.
struct SealedEnvelope {
  std::string recipient_key_id;
  Bytes wrapped_key;
  Bytes ciphertext;  // nonce || aead ciphertext

  Bytes Serialize() const;
  static SealedEnvelope Parse(ByteView bytes);

  bool operator==(const SealedEnvelope&) const = default;
};

SealedEnvelope Seal(const PublicKey& recipient, ByteView plaintext);

// Throws kWrongKey when the envelope is addressed to a different key and
// kCorrupted when authentication fails.
Bytes Open(const PrivateKey& recipient, const SealedEnvelope& envelope);

}  // namespace evote::crypto

#endif  // EVOTE_CRYPTO_SEAL_H_
