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

#include "evote/crypto/keys.h"

#include <sodium.h>

#include <algorithm>

#include "evote/common/error.h"
#include "evote/common/random.h"
#include "evote/crypto/digest.h"

namespace evote::crypto {
namespace {

void EnsureSodium() {
  if (sodium_init() < 0) throw Error(ErrorCode::kEntropy, "sodium_init failed");
}

}  // namespace

std::string_view KeyPurposeName(KeyPurpose p) {
  switch (p) {
    case KeyPurpose::kHttps: return "https";
    case KeyPurpose::kCommunication: return "communication";
    case KeyPurpose::kDatabase: return "database";
  }
  return "unknown";
}

KeyPurpose KeyPurposeFromName(std::string_view name) {
  if (name == "https") return KeyPurpose::kHttps;
  if (name == "communication") return KeyPurpose::kCommunication;
  if (name == "database") return KeyPurpose::kDatabase;
  throw Error(ErrorCode::kMalformed, "unknown key purpose: " + std::string(name));
}

KeyPurpose KeyPurposeFromByte(std::uint8_t b) {
  if (b < 1 || b > 3) throw Error(ErrorCode::kMalformed, "unknown key purpose tag");
  return static_cast<KeyPurpose>(b);
}

PublicKey::PublicKey(KeyPurpose purpose, ByteView bytes) : purpose_(purpose) {
  if (bytes.size() != kPublicKeySize) {
    throw Error(ErrorCode::kMalformed, "public key must be 64 bytes");
  }
  std::copy(bytes.begin(), bytes.end(), bytes_.begin());
}

std::string PublicKey::KeyId() const {
  Digest d = HashBytes(ByteView(bytes_));
  return HexEncode(ByteView(d.bytes.data(), 8));
}

PrivateKey::PrivateKey(KeyPurpose purpose, ByteView seed)
    : purpose_(purpose), seed_(seed) {
  if (seed.size() != kPrivateSeedSize) {
    throw Error(ErrorCode::kMalformed, "private key seed must be 32 bytes");
  }
}

SecureBytes PrivateKey::SigningSecret() const {
  EnsureSodium();
  SecureBytes sk(crypto_sign_SECRETKEYBYTES);
  std::uint8_t pk[crypto_sign_PUBLICKEYBYTES];
  crypto_sign_seed_keypair(pk, sk.data(), seed_.data());
  return sk;
}

SecureBytes PrivateKey::BoxSecret() const {
  EnsureSodium();
  SecureBytes box_seed(crypto_box_SEEDBYTES);
  crypto_generichash(box_seed.data(), box_seed.size(), seed_.data(), seed_.size(),
                     reinterpret_cast<const unsigned char*>("evote-box-key"), 13);
  SecureBytes sk(crypto_box_SECRETKEYBYTES);
  std::uint8_t pk[crypto_box_PUBLICKEYBYTES];
  crypto_box_seed_keypair(pk, sk.data(), box_seed.data());
  return sk;
}

PublicKey PrivateKey::Public() const {
  std::array<std::uint8_t, kPublicKeySize> out{};
  {
    SecureBytes sk = SigningSecret();
    crypto_sign_ed25519_sk_to_pk(out.data(), sk.data());
  }
  {
    SecureBytes sk = BoxSecret();
    crypto_scalarmult_base(out.data() + 32, sk.data());
  }
  return PublicKey(purpose_, out);
}

KeyPair GenerateKeyPairFromSeed(KeyPurpose purpose, ByteView seed_material) {
  EnsureSodium();
  Bytes material = ToBytes("evote-keygen");
  material.push_back(static_cast<std::uint8_t>(purpose));
  material.insert(material.end(), seed_material.begin(), seed_material.end());
  Digest seed = HashBytes(material);
  PrivateKey priv(purpose, seed.bytes);
  sodium_memzero(seed.bytes.data(), seed.bytes.size());
  PublicKey pub = priv.Public();
  return KeyPair{pub, std::move(priv)};
}

KeyPair GenerateKeyPair(KeyPurpose purpose, std::optional<std::uint64_t> seed) {
  if (seed) {
    std::uint8_t le[8];
    for (int i = 0; i < 8; ++i) le[i] = static_cast<std::uint8_t>(*seed >> (8 * i));
    return GenerateKeyPairFromSeed(purpose, le);
  }
  SecureBytes fresh(kPrivateSeedSize);
  DefaultRandom().Fill(fresh.span());
  PrivateKey priv(purpose, fresh.view());
  PublicKey pub = priv.Public();
  return KeyPair{pub, std::move(priv)};
}

Signature Sign(const PrivateKey& key, ByteView message) {
  SecureBytes sk = key.SigningSecret();
  Signature sig;
  sig.signer_purpose = key.purpose();
  sig.bytes.resize(crypto_sign_BYTES);
  crypto_sign_detached(sig.bytes.data(), nullptr, message.data(), message.size(),
                       sk.data());
  return sig;
}

bool Verify(const PublicKey& key, ByteView message, const Signature& signature) {
  EnsureSodium();
  if (signature.signer_purpose != key.purpose()) return false;
  if (signature.bytes.size() != crypto_sign_BYTES) return false;
  return crypto_sign_verify_detached(signature.bytes.data(), message.data(),
                                     message.size(), key.sign_key().data()) == 0;
}

void RequirePurpose(const PrivateKey& key, KeyPurpose expected) {
  if (key.purpose() != expected) {
    throw Error(ErrorCode::kInvalidArgument,
                "expected a " + std::string(KeyPurposeName(expected)) + " key, got " +
                    std::string(KeyPurposeName(key.purpose())));
  }
}

}  // namespace evote::crypto
