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

#ifndef EVOTE_WIRE_ENVELOPE_H_
#define EVOTE_WIRE_ENVELOPE_H_

#include <map>
#include <mutex>
#include <string>

#include "evote/common/clock.h"
#include "evote/common/component.h"
#include "evote/common/error.h"
#include "evote/crypto/keyring.h"
#include "evote/wire/transport.h"

namespace evote::wire {

inline constexpr Millis kReplayWindow = 5 * kMinute;

// One signed message between two components. Responses carry the nonce of
// the request they answer in `reply_to`.
struct WireEnvelope {
  Component sender = Component::kCommittee;
  Component recipient = Component::kCommittee;
  std::string type;
  Json body = Json::object();
  std::string nonce;
  std::string reply_to;
  Millis timestamp = 0;
  crypto::Signature signature;

  // Bytes covered by the signature.
  Bytes SignedBytes() const;

  // JSON form; `signature` is omitted when the signature travels in a
  // header.
  Json ToJson(bool with_signature = true) const;
  static WireEnvelope FromJson(const Json& j);
};

// Picks the sender key: the communication key once unlocked, otherwise the
// https key for bootstrap message types.
void SignEnvelope(WireEnvelope& env, const crypto::Keyring& keyring);

// Response body helpers. Errors travel as {"error": {"code", "message"}}.
Json ErrorBody(const Error& e);
// Throws the carried Error when `body` is an error body.
void RethrowIfError(const Json& body);

// Receiver-side checks: signature under the sender's directory key for the
// role that is allowed for the message type, timestamp inside the replay
// window and nonce not seen within it.
class EnvelopeVerifier {
 public:
  EnvelopeVerifier(Component self, crypto::KeyDirectory directory, const Clock& clock,
                   Millis window = kReplayWindow);

  // Throws kVerificationFailed, kReplay or kPermissionDenied.
  void Verify(const WireEnvelope& env);

 private:
  Component self_;
  crypto::KeyDirectory directory_;
  const Clock& clock_;
  Millis window_;
  std::mutex mu_;
  std::map<std::string, Millis> seen_;
};

std::string NewNonce();

// Receiver side of one exchange: verifies `request`, runs the handler and
// returns the signed reply. Verification failures and handler errors become
// error replies; `rejected` is set for the former. CrashSignal propagates.
// Throws kUnavailable when the reply cannot be signed.
WireEnvelope Dispatch(const WireEnvelope& request, MessageHandler& handler,
                      EnvelopeVerifier& verifier, const crypto::Keyring& keyring,
                      const Clock& clock, bool* rejected = nullptr);

}  // namespace evote::wire

#endif  // EVOTE_WIRE_ENVELOPE_H_
