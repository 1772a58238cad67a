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

#ifndef EVOTE_CREDENTIALS_CREDENTIALS_H_
#define EVOTE_CREDENTIALS_CREDENTIALS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evote/common/bytes.h"
#include "evote/crypto/digest.h"
#include "evote/crypto/keys.h"

namespace evote::credentials {

// Characters that can be told apart on screen: no 0/O, 1/l/I.
inline constexpr std::string_view kUnambiguousAlphabet =
    "23456789abcdefghijkmnopqrstuvwxyzABCDEFGHJKLMNPQRSTUVWXYZ";

struct PasswordPolicy {
  std::size_t length = 12;
  std::string alphabet{kUnambiguousAlphabet};

  // Throws kInvalidArgument if the policy itself is unusable.
  void Check() const;
  bool Complies(std::string_view password) const;
};

struct Credential {
  std::string voter_id;
  std::string password;

  bool operator==(const Credential&) const = default;
};

// One row of the electoral register: ID - hash(Pw) - sig_ERS - sig_VS.
struct CredentialRecord {
  std::string voter_id;
  crypto::Digest pw_hash;
  crypto::Signature sig_ers;  // by the registry over pw_hash
  crypto::Signature sig_vs;   // by the validator over sig_ers

  bool operator==(const CredentialRecord&) const = default;
};

// Voter ids are a 4-character sequence number in the policy alphabet
// followed by a 4-character random suffix, so they never collide.
std::vector<Credential> GenerateCredentials(std::size_t count,
                                            const PasswordPolicy& policy = {},
                                            std::optional<std::uint64_t> seed = std::nullopt);

// Both keys must be communication keys.
CredentialRecord SignCredential(const Credential& credential,
                                const crypto::PrivateKey& ers_communication,
                                const crypto::PrivateKey& vs_communication);

bool VerifyErsSignature(const CredentialRecord& record, const crypto::PublicKey& ers);
bool VerifyVsSignature(const CredentialRecord& record, const crypto::PublicKey& vs);

// Hides the secret until revealed; revealing is one-way.
class CredentialEnvelope {
 public:
  CredentialEnvelope(std::string voter_id, std::string_view password);

  const std::string& voter_id() const { return voter_id_; }
  bool revealed() const { return revealed_; }
  // Returns the password the first time; throws kIllegalState afterwards.
  std::string Reveal();

 private:
  std::string voter_id_;
  SecureBytes covered_secret_;
  bool revealed_ = false;
};

struct CredentialExport {
  std::string file;
  std::vector<CredentialEnvelope> envelopes;
};

enum class CredentialFormat { kTsv };

// File layout: header line "evote-credentials v1", then one
// "voter_id<TAB>password" line per credential, in input order.
CredentialExport ExportCredentials(const std::vector<Credential>& credentials,
                                   CredentialFormat format = CredentialFormat::kTsv);
std::vector<Credential> ImportCredentials(std::string_view file);

}  // namespace evote::credentials

#endif  // EVOTE_CREDENTIALS_CREDENTIALS_H_
