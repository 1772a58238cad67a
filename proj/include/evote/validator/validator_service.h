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

#ifndef EVOTE_VALIDATOR_VALIDATOR_SERVICE_H_
#define EVOTE_VALIDATOR_VALIDATOR_SERVICE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "evote/common/durable_log.h"
#include "evote/crypto/digest.h"
#include "evote/crypto/keyring.h"
#include "evote/wire/service_base.h"

namespace evote::validator {

enum class UseState { kUnused, kReserved, kUsed };
std::string_view UseStateName(UseState s);

enum class Verdict { kApproved, kRejected, kAlreadyUsed };
std::string_view VerdictName(Verdict v);
Verdict VerdictFromName(std::string_view name);

struct SignatureUseRecord {
  crypto::Digest fingerprint;
  UseState state = UseState::kUnused;
  Millis reserved_at = 0;
};

struct ValidatorConfig {
  // Must equal the registry session expiry.
  Millis reservation_expiry = 15 * kMinute;
};

// SHA-256 of the sig_ERS bytes; the only credential-derived value the
// validator stores.
crypto::Digest Fingerprint(const crypto::Signature& sig_ers);

// Second half of the two-man rule. Verifies the credential signature chain
// and keeps the used-signature store: unused -> reserved -> used, with
// reserved -> unused on release or expiry. Every transition is appended to a
// durable log.
class ValidatorService final : public wire::ServiceBase {
 public:
  ValidatorService(crypto::Keyring& keyring, crypto::KeyDirectory directory,
                   const Clock& clock, ValidatorConfig config = {},
                   std::optional<std::filesystem::path> data_dir = std::nullopt);

  // Verifies sig_ers over pw_hash with the registry key and sig_vs over
  // sig_ers with the validator key, then atomically reserves. Throws
  // kUnavailable while offline.
  Verdict ValidateAndReserve(const crypto::Digest& pw_hash, const crypto::Signature& sig_ers,
                             const crypto::Signature& sig_vs);
  // reserved -> used. Throws kIllegalState otherwise. Accepted while offline.
  void CommitUse(const crypto::Digest& fingerprint);
  // reserved -> unused. Throws kIllegalState otherwise. Accepted while offline.
  void ReleaseUse(const crypto::Digest& fingerprint);
  void GoOffline();
  // Expires reservations older than the configured expiry.
  void Poll();
  // Forgets every use record (logged) and relocks the keys.
  void ResetElection();

  bool online() const;
  UseState StateOf(const crypto::Digest& fingerprint) const;
  std::size_t UsedCount() const;

  wire::Json Handle(Component from, std::string_view type, const wire::Json& body) override;
  std::string DatabaseImage() const override;
  bool StorageIntact() const override;

 protected:
  void OnKeysUnlocked() override;
  wire::Json HealthDetails() const override;

 private:
  void Transition(SignatureUseRecord& rec, UseState to, std::string_view reason);
  void Replay();

  crypto::KeyDirectory directory_;
  ValidatorConfig config_;
  mutable std::mutex mu_;
  bool online_ = false;
  std::map<crypto::Digest, SignatureUseRecord> records_;
  std::unique_ptr<DurableLog> log_;
};

}  // namespace evote::validator

#endif  // EVOTE_VALIDATOR_VALIDATOR_SERVICE_H_
