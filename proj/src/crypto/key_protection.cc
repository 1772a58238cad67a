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

#include "evote/crypto/key_protection.h"

#include <sodium.h>

#include <string>

#include "evote/common/binary_io.h"
#include "evote/common/error.h"

namespace evote::crypto {
namespace {

constexpr std::string_view kKeyFileMagic = "EVKF";
constexpr std::string_view kPublicFileMagic = "EVPK";
constexpr std::string_view kPlainFileMagic = "EVSK";

Bytes AssociatedData(KeyPurpose purpose) {
  Bytes ad = ToBytes("evote-private-key");
  ad.push_back(static_cast<std::uint8_t>(purpose));
  return ad;
}

void ExpectMagic(BinaryReader& r, std::string_view magic) {
  Bytes m = r.Raw(4);
  if (ToString(m) != magic) throw Error(ErrorCode::kMalformed, "bad magic header");
}

void ExpectAlgorithm(BinaryReader& r) {
  if (r.FieldString() != kAlgorithmId) {
    throw Error(ErrorCode::kMalformed, "unsupported key algorithm");
  }
}

KeyPurpose ReadPurpose(BinaryReader& r) {
  Bytes p = r.Field();
  if (p.size() != 1) throw Error(ErrorCode::kMalformed, "bad purpose field");
  return KeyPurposeFromByte(p[0]);
}

SecureBytes DeriveKey(std::string_view passphrase, ByteView salt, const KdfParams& kdf) {
  SecureBytes key(crypto_aead_xchacha20poly1305_ietf_KEYBYTES);
  if (crypto_pwhash(key.data(), key.size(), passphrase.data(), passphrase.size(),
                    salt.data(), kdf.opslimit, kdf.memlimit,
                    crypto_pwhash_ALG_ARGON2ID13) != 0) {
    throw Error(ErrorCode::kUnavailable, "key derivation ran out of memory");
  }
  return key;
}

}  // namespace

KdfParams KdfParams::Interactive() {
  return {crypto_pwhash_OPSLIMIT_INTERACTIVE, crypto_pwhash_MEMLIMIT_INTERACTIVE};
}

KdfParams KdfParams::Fast() {
  return {crypto_pwhash_OPSLIMIT_MIN, crypto_pwhash_MEMLIMIT_MIN};
}

EncryptedPrivateKey ProtectPrivateKey(const PrivateKey& key,
                                      std::string_view passphrase, KdfParams kdf) {
  if (passphrase.empty()) throw Error(ErrorCode::kInvalidArgument, "empty passphrase");
  if (sodium_init() < 0) throw Error(ErrorCode::kEntropy, "sodium_init failed");
  EncryptedPrivateKey epk;
  epk.purpose = key.purpose();
  epk.kdf = kdf;
  epk.kdf_salt.resize(crypto_pwhash_SALTBYTES);
  randombytes_buf(epk.kdf_salt.data(), epk.kdf_salt.size());
  epk.nonce.resize(crypto_aead_xchacha20poly1305_ietf_NPUBBYTES);
  randombytes_buf(epk.nonce.data(), epk.nonce.size());

  SecureBytes wrap = DeriveKey(passphrase, epk.kdf_salt, kdf);
  Bytes ad = AssociatedData(key.purpose());
  epk.ciphertext.resize(key.seed().size() + crypto_aead_xchacha20poly1305_ietf_ABYTES);
  unsigned long long clen = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt(epk.ciphertext.data(), &clen,
                                             key.seed().data(), key.seed().size(),
                                             ad.data(), ad.size(), nullptr,
                                             epk.nonce.data(), wrap.data());
  epk.ciphertext.resize(clen);
  return epk;
}

PrivateKey UnlockPrivateKey(const EncryptedPrivateKey& epk, std::string_view passphrase) {
  if (passphrase.empty()) throw Error(ErrorCode::kInvalidArgument, "empty passphrase");
  if (epk.kdf_salt.size() != crypto_pwhash_SALTBYTES ||
      epk.nonce.size() != crypto_aead_xchacha20poly1305_ietf_NPUBBYTES) {
    throw Error(ErrorCode::kMalformed, "bad key envelope parameters");
  }
  SecureBytes wrap = DeriveKey(passphrase, epk.kdf_salt, epk.kdf);
  Bytes ad = AssociatedData(epk.purpose);
  if (epk.ciphertext.size() < crypto_aead_xchacha20poly1305_ietf_ABYTES) {
    throw Error(ErrorCode::kMalformed, "key ciphertext too short");
  }
  SecureBytes seed(epk.ciphertext.size() - crypto_aead_xchacha20poly1305_ietf_ABYTES);
  unsigned long long mlen = 0;
  if (crypto_aead_xchacha20poly1305_ietf_decrypt(
          seed.data(), &mlen, nullptr, epk.ciphertext.data(), epk.ciphertext.size(),
          ad.data(), ad.size(), epk.nonce.data(), wrap.data()) != 0) {
    throw Error(ErrorCode::kWrongPassphrase, "wrong passphrase");
  }
  return PrivateKey(epk.purpose, seed.view());
}

Bytes SerializeKeyFile(const EncryptedPrivateKey& epk) {
  BinaryWriter kdf;
  kdf.U64(epk.kdf.opslimit).U64(epk.kdf.memlimit);
  BinaryWriter w;
  w.Raw(AsBytes(kKeyFileMagic))
      .Field(Bytes{static_cast<std::uint8_t>(epk.purpose)})
      .Field(kAlgorithmId)
      .Field(epk.kdf_salt)
      .Field(kdf.bytes())
      .Field(epk.nonce)
      .Field(epk.ciphertext);
  return w.Take();
}

EncryptedPrivateKey ParseKeyFile(ByteView bytes) {
  BinaryReader r(bytes);
  ExpectMagic(r, kKeyFileMagic);
  EncryptedPrivateKey epk;
  epk.purpose = ReadPurpose(r);
  ExpectAlgorithm(r);
  epk.kdf_salt = r.Field();
  Bytes kdf = r.Field();
  BinaryReader kr(kdf);
  epk.kdf.opslimit = kr.U64();
  epk.kdf.memlimit = kr.U64();
  epk.nonce = r.Field();
  epk.ciphertext = r.Field();
  if (!r.AtEnd()) throw Error(ErrorCode::kMalformed, "trailing bytes in key file");
  return epk;
}

Bytes SerializePublicKeyFile(const PublicKey& key) {
  BinaryWriter w;
  w.Raw(AsBytes(kPublicFileMagic))
      .Field(Bytes{static_cast<std::uint8_t>(key.purpose())})
      .Field(kAlgorithmId)
      .Field(key.bytes());
  return w.Take();
}

PublicKey ParsePublicKeyFile(ByteView bytes) {
  BinaryReader r(bytes);
  ExpectMagic(r, kPublicFileMagic);
  KeyPurpose purpose = ReadPurpose(r);
  ExpectAlgorithm(r);
  Bytes key = r.Field();
  if (!r.AtEnd()) throw Error(ErrorCode::kMalformed, "trailing bytes in key file");
  return PublicKey(purpose, key);
}

Bytes SerializePlainKeyFile(const PrivateKey& key) {
  BinaryWriter w;
  w.Raw(AsBytes(kPlainFileMagic))
      .Field(Bytes{static_cast<std::uint8_t>(key.purpose())})
      .Field(kAlgorithmId)
      .Field(key.seed());
  return w.Take();
}

PrivateKey ParsePlainKeyFile(ByteView bytes) {
  BinaryReader r(bytes);
  ExpectMagic(r, kPlainFileMagic);
  KeyPurpose purpose = ReadPurpose(r);
  ExpectAlgorithm(r);
  SecureBytes seed(r.Field());
  if (!r.AtEnd()) throw Error(ErrorCode::kMalformed, "trailing bytes in key file");
  return PrivateKey(purpose, seed.view());
}

}  // namespace evote::crypto
