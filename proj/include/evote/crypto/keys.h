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

#ifndef EVOTE_CRYPTO_KEYS_H_
#define EVOTE_CRYPTO_KEYS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "evote/common/bytes.h"

namespace evote::crypto {

enum class KeyPurpose : std::uint8_t {
  kHttps = 1,
  kCommunication = 2,
  kDatabase = 3,
};

std::string_view KeyPurposeName(KeyPurpose p);
KeyPurpose KeyPurposeFromName(std::string_view name);
KeyPurpose KeyPurposeFromByte(std::uint8_t b);

// Identifies the algorithm suite behind every key, signature and envelope.
inline constexpr std::string_view kAlgorithmId = "ed25519+x25519-xchacha20poly1305";

inline constexpr std::size_t kPublicKeySize = 64;
inline constexpr std::size_t kPrivateSeedSize = 32;

// Ed25519 verification key followed by the X25519 sealing key.
class PublicKey {
 public:
  PublicKey() = default;
  PublicKey(KeyPurpose purpose, ByteView bytes);

  KeyPurpose purpose() const { return purpose_; }
  ByteView sign_key() const { return {bytes_.data(), 32}; }
  ByteView box_key() const { return {bytes_.data() + 32, 32}; }
  ByteView bytes() const { return bytes_; }
  // Short stable identifier: hex of the first 8 bytes of SHA-256(bytes).
  std::string KeyId() const;

  bool operator==(const PublicKey& o) const = default;

 private:
  KeyPurpose purpose_ = KeyPurpose::kCommunication;
  std::array<std::uint8_t, kPublicKeySize> bytes_{};
};

// A 32-byte seed from which both the signing and the sealing secrets are
// derived. Wiped on destruction.
class PrivateKey {
 public:
  PrivateKey(KeyPurpose purpose, ByteView seed);

  KeyPurpose purpose() const { return purpose_; }
  ByteView seed() const { return seed_.view(); }
  PublicKey Public() const;

  // Expanded secrets; callers must not retain them.
  SecureBytes SigningSecret() const;
  SecureBytes BoxSecret() const;

 private:
  KeyPurpose purpose_;
  SecureBytes seed_;
};

struct KeyPair {
  PublicKey public_key;
  PrivateKey private_key;
};

// Fresh keypair. With a seed the result is reproducible across runs.
KeyPair GenerateKeyPair(KeyPurpose purpose,
                        std::optional<std::uint64_t> seed = std::nullopt);
KeyPair GenerateKeyPairFromSeed(KeyPurpose purpose, ByteView seed_material);

struct Signature {
  Bytes bytes;
  KeyPurpose signer_purpose = KeyPurpose::kCommunication;

  bool operator==(const Signature&) const = default;
};

Signature Sign(const PrivateKey& key, ByteView message);
bool Verify(const PublicKey& key, ByteView message, const Signature& signature);

// Throws kInvalidArgument unless key.purpose() == expected.
void RequirePurpose(const PrivateKey& key, KeyPurpose expected);

}  // namespace evote::crypto

#endif  // EVOTE_CRYPTO_KEYS_H_
