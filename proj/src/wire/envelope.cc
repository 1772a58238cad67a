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

#include "evote/wire/envelope.h"

#include "evote/common/binary_io.h"
#include "evote/common/error.h"
#include "evote/common/random.h"
#include "evote/wire/codec.h"

namespace evote::wire {

Bytes WireEnvelope::SignedBytes() const {
  BinaryWriter w;
  w.Field(AsBytes("evote-envelope-v1"));
  w.Field(AsBytes(ComponentName(sender)));
  w.Field(AsBytes(ComponentName(recipient)));
  w.Field(AsBytes(type));
  w.Field(AsBytes(body.dump()));
  w.Field(AsBytes(nonce));
  w.Field(AsBytes(reply_to));
  w.U64(static_cast<std::uint64_t>(timestamp));
  w.U8(static_cast<std::uint8_t>(signature.signer_purpose));
  return w.Take();
}

Json WireEnvelope::ToJson(bool with_signature) const {
  Json j{{"sender", ComponentName(sender)},
         {"recipient", ComponentName(recipient)},
         {"type", type},
         {"body", body},
         {"nonce", nonce},
         {"reply_to", reply_to},
         {"timestamp", timestamp},
         {"key_role", crypto::KeyPurposeName(signature.signer_purpose)}};
  if (with_signature) j["signature"] = EncodeBytes(signature.bytes);
  return j;
}

WireEnvelope WireEnvelope::FromJson(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kMalformed, "envelope is not an object");
  WireEnvelope env;
  env.sender = ComponentFromName(StringField(j, "sender"));
  env.recipient = ComponentFromName(StringField(j, "recipient"));
  env.type = StringField(j, "type");
  env.body = Field(j, "body");
  env.nonce = StringField(j, "nonce");
  env.reply_to = StringField(j, "reply_to");
  env.timestamp = IntField(j, "timestamp");
  env.signature.signer_purpose = crypto::KeyPurposeFromName(StringField(j, "key_role"));
  if (j.contains("signature")) env.signature.bytes = DecodeBytes(j.at("signature"));
  return env;
}

namespace {

bool IsBootstrapOrReply(std::string_view type) {
  if (type.ends_with(".reply")) type.remove_suffix(6);
  return IsBootstrapMessage(type);
}

}  // namespace

void SignEnvelope(WireEnvelope& env, const crypto::Keyring& keyring) {
  // The purpose is part of the signed bytes, so fix it before signing.
  if (keyring.IsUnlocked(crypto::KeyPurpose::kCommunication)) {
    env.signature.signer_purpose = crypto::KeyPurpose::kCommunication;
    env.signature = crypto::Sign(keyring.Communication(), env.SignedBytes());
  } else if (IsBootstrapOrReply(env.type)) {
    env.signature.signer_purpose = crypto::KeyPurpose::kHttps;
    env.signature = crypto::Sign(keyring.Https(), env.SignedBytes());
  } else {
    throw Error(ErrorCode::kIllegalState, "communication key locked");
  }
}

Json ErrorBody(const Error& e) {
  return Json{{"error", {{"code", ErrorCodeName(e.code())}, {"message", e.what()}}}};
}

void RethrowIfError(const Json& body) {
  if (!body.is_object() || !body.contains("error")) return;
  const Json& err = body.at("error");
  ErrorCode code = ErrorCode::kTransport;
  std::string message = "remote error";
  try {
    code = ErrorCodeFromName(err.at("code").get<std::string>());
    message = err.at("message").get<std::string>();
  } catch (const std::exception&) {
  }
  throw Error(code, message);
}

EnvelopeVerifier::EnvelopeVerifier(Component self, crypto::KeyDirectory directory,
                                   const Clock& clock, Millis window)
    : self_(self), directory_(std::move(directory)), clock_(clock), window_(window) {}

void EnvelopeVerifier::Verify(const WireEnvelope& env) {
  if (env.recipient != self_) {
    throw Error(ErrorCode::kVerificationFailed, "envelope addressed elsewhere");
  }
  const auto role = env.signature.signer_purpose;
  const bool bootstrap = IsBootstrapOrReply(env.type);
  if (role != crypto::KeyPurpose::kCommunication &&
      !(role == crypto::KeyPurpose::kHttps && bootstrap)) {
    throw Error(ErrorCode::kVerificationFailed, "key role not allowed for message type");
  }
  auto it = directory_.find(env.sender);
  if (it == directory_.end()) throw Error(ErrorCode::kVerificationFailed, "unknown sender");
  if (!crypto::Verify(it->second.Get(role), env.SignedBytes(), env.signature)) {
    throw Error(ErrorCode::kVerificationFailed, "envelope signature invalid");
  }
  const Millis now = clock_.Now();
  if (env.timestamp < now - window_ || env.timestamp > now + window_) {
    throw Error(ErrorCode::kReplay, "envelope outside replay window");
  }
  std::lock_guard lock(mu_);
  for (auto s = seen_.begin(); s != seen_.end();) {
    s = s->second < now - window_ ? seen_.erase(s) : std::next(s);
  }
  if (!seen_.emplace(env.nonce, env.timestamp).second) {
    throw Error(ErrorCode::kReplay, "replayed nonce");
  }
}

std::string NewNonce() { return HexEncode(SystemRandom().Generate(16)); }

WireEnvelope Dispatch(const WireEnvelope& request, MessageHandler& handler,
                      EnvelopeVerifier& verifier, const crypto::Keyring& keyring,
                      const Clock& clock, bool* rejected) {
  WireEnvelope reply;
  reply.sender = request.recipient;
  reply.recipient = request.sender;
  reply.type = request.type + ".reply";
  reply.nonce = NewNonce();
  reply.reply_to = request.nonce;
  try {
    verifier.Verify(request);
    try {
      reply.body = handler.Handle(request.sender, request.type, request.body);
    } catch (const Error& e) {
      reply.body = ErrorBody(e);
    } catch (const nlohmann::json::exception&) {
      reply.body = ErrorBody(Error(ErrorCode::kMalformed, "malformed message body"));
    }
  } catch (const Error& e) {
    if (rejected != nullptr) *rejected = true;
    reply.body = ErrorBody(e);
  }
  reply.timestamp = clock.Now();
  try {
    SignEnvelope(reply, keyring);
  } catch (const Error&) {
    throw Error(ErrorCode::kUnavailable, "recipient keys locked");
  }
  return reply;
}

}  // namespace evote::wire
