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

#include "evote/wire/codec.h"

#include "evote/common/error.h"
#include "evote/crypto/erase.h"

namespace evote::wire {

Json EncodeBytes(ByteView b) { return Base64Encode(b); }

Bytes DecodeBytes(const Json& j) {
  if (!j.is_string()) throw Error(ErrorCode::kMalformed, "expected base64 string");
  return Base64Decode(j.get<std::string>());
}

Json EncodeDigest(const crypto::Digest& d) { return EncodeBytes(d.view()); }

crypto::Digest DecodeDigest(const Json& j) { return crypto::Digest::FromBytes(DecodeBytes(j)); }

Json EncodeSignature(const crypto::Signature& s) {
  return Json{{"purpose", crypto::KeyPurposeName(s.signer_purpose)}, {"sig", EncodeBytes(s.bytes)}};
}

crypto::Signature DecodeSignature(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kMalformed, "expected signature object");
  return {DecodeBytes(Field(j, "sig")), crypto::KeyPurposeFromName(StringField(j, "purpose"))};
}

Json SealValue(const crypto::PublicKey& recipient, ByteView value) {
  return EncodeBytes(crypto::Seal(recipient, value).Serialize());
}

SecureBytes OpenValue(const crypto::PrivateKey& recipient, const Json& sealed) {
  Bytes plain = crypto::Open(recipient, crypto::SealedEnvelope::Parse(DecodeBytes(sealed)));
  SecureBytes out(plain);
  crypto::SecureErase(plain);
  return out;
}

const Json& Field(const Json& body, const char* name) {
  if (!body.is_object() || !body.contains(name)) {
    throw Error(ErrorCode::kMalformed, std::string("missing field ") + name);
  }
  return body.at(name);
}

std::string StringField(const Json& body, const char* name) {
  const Json& f = Field(body, name);
  if (!f.is_string()) throw Error(ErrorCode::kMalformed, std::string("field not a string: ") + name);
  return f.get<std::string>();
}

std::int64_t IntField(const Json& body, const char* name) {
  const Json& f = Field(body, name);
  if (!f.is_number_integer()) {
    throw Error(ErrorCode::kMalformed, std::string("field not an integer: ") + name);
  }
  return f.get<std::int64_t>();
}

}  // namespace evote::wire
