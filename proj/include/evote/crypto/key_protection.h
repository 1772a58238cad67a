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

#ifndef EVOTE_CRYPTO_KEY_PROTECTION_H_
#define EVOTE_CRYPTO_KEY_PROTECTION_H_

#include <cstdint>
#include <string_view>

#include "evote/common/bytes.h"
#include "evote/crypto/keys.h"

namespace evote::crypto {

// Argon2id cost parameters.
struct KdfParams {
  std::uint64_t opslimit;
  std::uint64_t memlimit;

  static KdfParams Interactive();
  // Lowest accepted cost; for tests and simulations only.
  static KdfParams Fast();
};

struct EncryptedPrivateKey {
  KeyPurpose purpose = KeyPurpose::kCommunication;
  Bytes kdf_salt;
  KdfParams kdf = KdfParams::Interactive();
  Bytes nonce;
  Bytes ciphertext;
};

EncryptedPrivateKey ProtectPrivateKey(const PrivateKey& key,
                                      std::string_view passphrase,
                                      KdfParams kdf = KdfParams::Interactive());

// Throws kWrongPassphrase on authentication failure.
PrivateKey UnlockPrivateKey(const EncryptedPrivateKey& epk,
                            std::string_view passphrase);

// Key file envelope. Layout (all integers big-endian):
//   "EVKF" magic
//   field purpose   (1 byte)
//   field algorithm (ascii)
//   field salt
//   field kdf       (u64 opslimit, u64 memlimit)
//   field nonce
//   field ciphertext
// where `field` is a u32 length followed by that many bytes.
Bytes SerializeKeyFile(const EncryptedPrivateKey& epk);
EncryptedPrivateKey ParseKeyFile(ByteView bytes);

// Public key file: "EVPK", field purpose, field algorithm, field key bytes.
Bytes SerializePublicKeyFile(const PublicKey& key);
PublicKey ParsePublicKeyFile(ByteView bytes);

// Unencrypted private key file (https keys only): "EVSK", field purpose,
// field algorithm, field seed.
Bytes SerializePlainKeyFile(const PrivateKey& key);
PrivateKey ParsePlainKeyFile(ByteView bytes);

}  // namespace evote::crypto

#endif  // EVOTE_CRYPTO_KEY_PROTECTION_H_
