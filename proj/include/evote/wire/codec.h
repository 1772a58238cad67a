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

#ifndef EVOTE_WIRE_CODEC_H_
#define EVOTE_WIRE_CODEC_H_

#include <string>

#include <json.hpp>

#include "evote/common/bytes.h"
#include "evote/crypto/digest.h"
#include "evote/crypto/keys.h"
#include "evote/crypto/seal.h"

namespace evote::wire {

using Json = nlohmann::json;

// JSON encodings of binary values. Bytes are base64 strings.
Json EncodeBytes(ByteView b);
Bytes DecodeBytes(const Json& j);

Json EncodeDigest(const crypto::Digest& d);
crypto::Digest DecodeDigest(const Json& j);

Json EncodeSignature(const crypto::Signature& s);
crypto::Signature DecodeSignature(const Json& j);

// Secret values (voting tokens) travel sealed to the recipient's
// communication key.
Json SealValue(const crypto::PublicKey& recipient, ByteView value);
SecureBytes OpenValue(const crypto::PrivateKey& recipient, const Json& sealed);

// Field access that throws kMalformed instead of json exceptions.
const Json& Field(const Json& body, const char* name);
std::string StringField(const Json& body, const char* name);
std::int64_t IntField(const Json& body, const char* name);

}  // namespace evote::wire

#endif  // EVOTE_WIRE_CODEC_H_
