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

#include "evote/crypto/seal.h"

#include <sodium.h>

#include "evote/common/binary_io.h"
#include "evote/common/error.h"

namespace evote::crypto {

Bytes SealedEnvelope::Serialize() const {
  BinaryWriter w;
  w.Field(recipient_key_id).Field(wrapped_key).Field(ciphertext);
  return w.Take();
}

SealedEnvelope SealedEnvelope::Parse(ByteView bytes) {
  BinaryReader r(bytes);
  SealedEnvelope e;
  e.recipient_key_id = r.FieldString();
  e.wrapped_key = r.Field();
  e.ciphertext = r.Field();
  if (!r.AtEnd()) throw Error(ErrorCode::kMalformed, "trailing bytes after envelope");
  return e;
}

SealedEnvelope Seal(const PublicKey& recipient, ByteView plaintext) {
  if (sodium_init() < 0) throw Error(ErrorCode::kEntropy, "sodium_init failed");
  SealedEnvelope env;
  env.recipient_key_id = recipient.KeyId();

  SecureBytes data_key(crypto_aead_xchacha20poly1305_ietf_KEYBYTES);
  crypto_aead_xchacha20poly1305_ietf_keygen(data_key.data());

  env.wrapped_key.resize(crypto_box_SEALBYTES + data_key.size());
  crypto_box_seal(env.wrapped_key.data(), data_key.data(), data_key.size(),
                  recipient.box_key().data());

  const std::size_t nonce_len = crypto_aead_xchacha20poly1305_ietf_NPUBBYTES;
  env.ciphertext.resize(nonce_len + plaintext.size() +
                        crypto_aead_xchacha20poly1305_ietf_ABYTES);
  randombytes_buf(env.ciphertext.data(), nonce_len);
  unsigned long long clen = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt(
      env.ciphertext.data() + nonce_len, &clen, plaintext.data(), plaintext.size(),
      reinterpret_cast<const unsigned char*>(env.recipient_key_id.data()),
      env.recipient_key_id.size(), nullptr, env.ciphertext.data(), data_key.data());
  env.ciphertext.resize(nonce_len + clen);
  return env;
}

Bytes Open(const PrivateKey& recipient, const SealedEnvelope& envelope) {
  PublicKey pub = recipient.Public();
  if (envelope.recipient_key_id != pub.KeyId()) {
    throw Error(ErrorCode::kWrongKey, "envelope addressed to another key");
  }
  if (envelope.wrapped_key.size() != crypto_box_SEALBYTES +
                                         crypto_aead_xchacha20poly1305_ietf_KEYBYTES) {
    throw Error(ErrorCode::kCorrupted, "wrapped key has wrong size");
  }
  SecureBytes box_sk = recipient.BoxSecret();
  SecureBytes data_key(crypto_aead_xchacha20poly1305_ietf_KEYBYTES);
  if (crypto_box_seal_open(data_key.data(), envelope.wrapped_key.data(),
                           envelope.wrapped_key.size(), pub.box_key().data(),
                           box_sk.data()) != 0) {
    throw Error(ErrorCode::kWrongKey, "cannot unwrap data key");
  }
  const std::size_t nonce_len = crypto_aead_xchacha20poly1305_ietf_NPUBBYTES;
  if (envelope.ciphertext.size() < nonce_len + crypto_aead_xchacha20poly1305_ietf_ABYTES) {
    throw Error(ErrorCode::kCorrupted, "ciphertext too short");
  }
  Bytes out(envelope.ciphertext.size() - nonce_len);
  unsigned long long mlen = 0;
  if (crypto_aead_xchacha20poly1305_ietf_decrypt(
          out.data(), &mlen, nullptr, envelope.ciphertext.data() + nonce_len,
          envelope.ciphertext.size() - nonce_len,
          reinterpret_cast<const unsigned char*>(envelope.recipient_key_id.data()),
          envelope.recipient_key_id.size(), envelope.ciphertext.data(),
          data_key.data()) != 0) {
    throw Error(ErrorCode::kCorrupted, "envelope authentication failed");
  }
  out.resize(mlen);
  return out;
}

}  // namespace evote::crypto
