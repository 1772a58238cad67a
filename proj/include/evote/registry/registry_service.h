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

#ifndef EVOTE_REGISTRY_REGISTRY_SERVICE_H_
#define EVOTE_REGISTRY_REGISTRY_SERVICE_H_

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "evote/common/durable_log.h"
#include "evote/common/random.h"
#include "evote/credentials/credentials.h"
#include "evote/credentials/signed_register.h"
#include "evote/crypto/keyring.h"
#include "evote/registry/keyboard.h"
#include "evote/wire/service_base.h"

namespace evote::registry {

enum class VoterState { kEligible, kSessionActive, kVoted };
std::string_view VoterStateName(VoterState s);

struct VoterStatus {
  std::string voter_id;
  VoterState state = VoterState::kEligible;
};

struct LoginSession {
  std::string session_id;
  KeyboardLayout keyboard_layout;
  Millis created_at = 0;
  Millis expires_at = 0;
};

struct AuthOutcome {
  enum class Kind { kTokenIssued, kAlreadyVoted, kRejected };
  Kind kind = Kind::kRejected;
  // Set only for kTokenIssued. The signature is the registry's over the
  // token value, checked by the ballot box on voter requests.
  SecureBytes token;
  crypto::Signature token_signature;

  // Identical bytes for every rejection cause.
  static constexpr std::string_view kRejectedNotice = "authentication failed";
  static constexpr std::string_view kAlreadyVotedNotice = "you have voted";
};

struct Counts {
  std::int64_t eligible = 0;
  std::int64_t session_active = 0;
  std::int64_t voted = 0;
};

struct RegistryConfig {
  Millis session_expiry = 15 * kMinute;
  Millis login_expiry = 15 * kMinute;
  std::string keyboard_alphabet{credentials::kUnambiguousAlphabet};
};

// Electoral register server. Checks hash(password) against the register,
// obtains the validator's independent approval, issues voting tokens and
// tracks voted status. Token values are held in memory only.
class RegistryService final : public wire::ServiceBase {
 public:
  RegistryService(crypto::Keyring& keyring, crypto::KeyDirectory directory,
                  credentials::SignedRegister reg, const Clock& clock, wire::Transport& transport,
                  RandomSource& rng, RegistryConfig config = {},
                  std::optional<std::filesystem::path> data_dir = std::nullopt);

  // Unlocks both keys and starts accepting voters once the register
  // verifies.
  void BringOnline(std::string_view comm_passphrase, std::string_view db_passphrase);
  bool online() const;

  LoginSession BeginLogin();
  std::string DecodeCoordinates(const std::string& session_id, const std::vector<Click>& clicks);
  // Voter entry point: both the id and the password arrive as clicks on
  // the session's keyboard. The login session is consumed.
  AuthOutcome Login(const std::string& session_id, const std::vector<Click>& id_clicks,
                    const std::vector<Click>& password_clicks);
  AuthOutcome Authenticate(const std::string& voter_id, const std::string& password);

  void MarkVoted(const std::string& voter_id);
  void ReleaseSession(const std::string& voter_id);
  void GoOffline();
  Counts counts() const;
  VoterState StateOf(const std::string& voter_id) const;
  // Expires idle sessions and login sessions; retries queued validator
  // notifications.
  void Poll();
  // Resets every voter to eligible (logged) and relocks the keys.
  void ResetElection();

  // Ballot-box side of the confirm protocol.
  void PrepareCommit(ByteView token, std::int64_t sequence_no);
  void FinalizeCommit(ByteView token);
  void AbortCommit(ByteView token);
  void TokenCancelled(ByteView token);
  // After a ballot-box restart every token it held is gone. Sessions that
  // were committing at a sequence number below `stored_count` are voted;
  // every other session is released.
  void Recover(std::int64_t stored_count);

  // Harness probe: protocol events in order ("validator_contacted",
  // "validator_approved", "token_issued", ...). Never carries ids.
  void SetTraceSink(std::function<void(std::string_view)> sink);

  const credentials::SignedRegister& signed_register() const { return register_; }

  wire::Json Handle(Component from, std::string_view type, const wire::Json& body) override;
  std::string DatabaseImage() const override;
  bool StorageIntact() const override;

 protected:
  void OnKeysUnlocked() override;
  wire::Json HealthDetails() const override;

 private:
  struct Voter {
    VoterState state = VoterState::kEligible;
    bool authenticating = false;
    SecureBytes token;
    Millis session_expires = 0;
    std::optional<std::int64_t> committing_seq;
  };

  enum class Notify { kBallotBox, kNone };

  void Trace(std::string_view event);
  Voter* FindByToken(ByteView token, std::string* voter_id);
  // Requires mu_ held.
  void MarkVotedLocked(const std::string& voter_id, Voter& v);
  void EndSessionLocked(const std::string& voter_id, Voter& v, Notify notify);
  void FlushNotifications();
  crypto::Digest FingerprintOf(const std::string& voter_id) const;

  crypto::KeyDirectory directory_;
  credentials::SignedRegister register_;
  wire::Transport& transport_;
  RandomSource& rng_;
  RegistryConfig config_;

  mutable std::mutex mu_;
  bool online_ = false;
  std::map<std::string, Voter> voters_;
  std::map<std::string, LoginSession> logins_;
  std::unique_ptr<DurableLog> log_;
  // Validator / ballot-box notifications that could not be delivered.
  std::vector<std::pair<std::string, crypto::Digest>> pending_validator_;
  std::vector<SecureBytes> pending_revocations_;
  std::function<void(std::string_view)> trace_;
};

}  // namespace evote::registry

#endif  // EVOTE_REGISTRY_REGISTRY_SERVICE_H_
