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

#ifndef EVOTE_WIRE_ATTESTATION_H_
#define EVOTE_WIRE_ATTESTATION_H_

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "evote/common/clock.h"
#include "evote/crypto/keys.h"
#include "evote/wire/transport.h"

namespace evote::wire {

// The committee's signed statement of its lifecycle state, bound to the
// action it authorizes and the officers who approved it.
struct StateAttestation {
  std::string state;
  std::string action;
  std::vector<std::string> approvals;
  int threshold = 0;
  std::string nonce;
  Millis timestamp = 0;
  crypto::Signature signature;

  Bytes SignedBytes() const;
  Json ToJson() const;
  static StateAttestation FromJson(const Json& j);
};

StateAttestation Attest(std::string state, std::string action,
                        std::vector<std::string> approvals, int threshold, Millis now,
                        const crypto::PrivateKey& committee_communication);

// Single-use check on the receiving component.
class AttestationVerifier {
 public:
  AttestationVerifier(crypto::PublicKey committee, const Clock& clock);

  // Throws kPermissionDenied if the signature, state, action, freshness,
  // nonce or the S-of-N approval set (S > 1, distinct officers) fail.
  void Verify(const StateAttestation& a, std::string_view state, std::string_view action);

 private:
  crypto::PublicKey committee_;
  const Clock& clock_;
  std::mutex mu_;
  std::map<std::string, Millis> used_;
};

}  // namespace evote::wire

#endif  // EVOTE_WIRE_ATTESTATION_H_
