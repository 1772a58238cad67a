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

#include "evote/wire/attestation.h"

#include <set>

#include "evote/common/binary_io.h"
#include "evote/common/error.h"
#include "evote/wire/codec.h"
#include "evote/wire/envelope.h"

namespace evote::wire {

Bytes StateAttestation::SignedBytes() const {
  BinaryWriter w;
  w.Field(AsBytes("evote-attestation-v1"));
  w.Field(AsBytes(state));
  w.Field(AsBytes(action));
  w.U32(static_cast<std::uint32_t>(approvals.size()));
  for (const auto& a : approvals) w.Field(AsBytes(a));
  w.U32(static_cast<std::uint32_t>(threshold));
  w.Field(AsBytes(nonce));
  w.U64(static_cast<std::uint64_t>(timestamp));
  return w.Take();
}

Json StateAttestation::ToJson() const {
  return Json{{"state", state},         {"action", action},   {"approvals", approvals},
              {"threshold", threshold}, {"nonce", nonce},     {"timestamp", timestamp},
              {"signature", EncodeSignature(signature)}};
}

StateAttestation StateAttestation::FromJson(const Json& j) {
  StateAttestation a;
  a.state = StringField(j, "state");
  a.action = StringField(j, "action");
  const Json& approvals = Field(j, "approvals");
  if (!approvals.is_array()) throw Error(ErrorCode::kMalformed, "approvals must be a list");
  for (const auto& o : approvals) {
    if (!o.is_string()) throw Error(ErrorCode::kMalformed, "approval must be a string");
    a.approvals.push_back(o.get<std::string>());
  }
  a.threshold = static_cast<int>(IntField(j, "threshold"));
  a.nonce = StringField(j, "nonce");
  a.timestamp = IntField(j, "timestamp");
  a.signature = DecodeSignature(Field(j, "signature"));
  return a;
}

StateAttestation Attest(std::string state, std::string action,
                        std::vector<std::string> approvals, int threshold, Millis now,
                        const crypto::PrivateKey& committee_communication) {
  StateAttestation a;
  a.state = std::move(state);
  a.action = std::move(action);
  a.approvals = std::move(approvals);
  a.threshold = threshold;
  a.nonce = NewNonce();
  a.timestamp = now;
  a.signature = crypto::Sign(committee_communication, a.SignedBytes());
  return a;
}

AttestationVerifier::AttestationVerifier(crypto::PublicKey committee, const Clock& clock)
    : committee_(std::move(committee)), clock_(clock) {}

void AttestationVerifier::Verify(const StateAttestation& a, std::string_view state,
                                 std::string_view action) {
  auto deny = [](const char* why) { throw Error(ErrorCode::kPermissionDenied, why); };
  if (!crypto::Verify(committee_, a.SignedBytes(), a.signature)) {
    deny("attestation signature invalid");
  }
  if (a.state != state) deny("election is not in the required state");
  if (a.action != action) deny("attestation is for another action");
  std::set<std::string> distinct(a.approvals.begin(), a.approvals.end());
  if (a.threshold < 2 || distinct.size() != a.approvals.size() ||
      static_cast<int>(distinct.size()) < a.threshold) {
    deny("insufficient authorizations");
  }
  const Millis now = clock_.Now();
  if (a.timestamp < now - kReplayWindow || a.timestamp > now + kReplayWindow) {
    deny("attestation expired");
  }
  std::lock_guard lock(mu_);
  for (auto it = used_.begin(); it != used_.end();) {
    it = it->second < now - kReplayWindow ? used_.erase(it) : std::next(it);
  }
  if (!used_.emplace(a.nonce, a.timestamp).second) deny("attestation already used");
}

}  // namespace evote::wire
