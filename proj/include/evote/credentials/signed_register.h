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

#ifndef EVOTE_CREDENTIALS_SIGNED_REGISTER_H_
#define EVOTE_CREDENTIALS_SIGNED_REGISTER_H_

#include <string>
#include <string_view>
#include <vector>

#include "evote/credentials/credentials.h"

namespace evote::credentials {

struct SignedRegister {
  std::vector<CredentialRecord> records;  // sorted by voter_id when built
  crypto::Signature register_signature;

  const CredentialRecord* Find(std::string_view voter_id) const;
};

// Canonical byte form covered by the register signature: records in stored
// order, every field length-prefixed.
Bytes CanonicalRecords(const std::vector<CredentialRecord>& records);

// Sorts by voter_id and signs. Throws kInvalidArgument on an empty input or
// kAlreadyExists on a duplicate voter id.
SignedRegister BuildSignedRegister(std::vector<CredentialRecord> records,
                                   const crypto::PrivateKey& ers_communication);

struct RegisterReport {
  struct Entry {
    std::string voter_id;
    bool ers_signature_ok = false;
    bool vs_signature_ok = false;
  };

  bool malformed = false;
  std::string malformed_reason;
  std::vector<Entry> entries;
  bool register_signature_ok = false;

  bool ok() const;
  std::vector<std::string> FlaggedRecords() const;
};

RegisterReport VerifyRegister(const SignedRegister& reg, const crypto::PublicKey& ers,
                              const crypto::PublicKey& vs);

// Register file: header "evote-register v1", one line per record
//   R<TAB>voter_id<TAB>b64(pw_hash)<TAB>b64(sig_ers)<TAB>b64(sig_vs)
// and a final line S<TAB>b64(register_signature).
std::string SerializeRegister(const SignedRegister& reg);
// Throws kMalformed.
SignedRegister ParseRegister(std::string_view text);
// Parses and verifies; parse failures become a malformed report.
RegisterReport VerifyRegisterFile(std::string_view text, const crypto::PublicKey& ers,
                                  const crypto::PublicKey& vs);

}  // namespace evote::credentials

#endif  // EVOTE_CREDENTIALS_SIGNED_REGISTER_H_
