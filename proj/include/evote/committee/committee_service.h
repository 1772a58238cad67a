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

#ifndef EVOTE_COMMITTEE_COMMITTEE_SERVICE_H_
#define EVOTE_COMMITTEE_COMMITTEE_SERVICE_H_

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "evote/ballotbox/ballot.h"
#include "evote/committee/baseline.h"
#include "evote/common/audit.h"
#include "evote/common/durable_log.h"
#include "evote/common/random.h"
#include "evote/crypto/key_protection.h"
#include "evote/crypto/keyring.h"
#include "evote/wire/attestation.h"
#include "evote/wire/service_base.h"

namespace evote::committee {

enum class ElectionState {
  kSetup,
  kAwaitingStartAuthorization,
  kAwaitingPassphrases,
  kVoting,
  kGracePeriod,
  kStopped,
  kTallied,
  kArchived,
};
std::string_view ElectionStateName(ElectionState s);

enum class Action { kStart, kStop, kTally, kClear };
std::string_view ActionName(Action a);
Action ActionFromName(std::string_view name);

struct Officer {
  std::string officer_id;
  std::string password_hash;  // libsodium pwhash string
};

// Argon2id password string for an officer credential.
std::string HashOfficerPassword(std::string_view password,
                                crypto::KdfParams kdf = crypto::KdfParams::Interactive());

struct CommitteeConfig {
  int threshold = 2;  // S
  std::vector<Officer> officers;
  std::int64_t low_turnout_threshold = 10;
  Millis grace_period = 600 * kSecond;
  Millis selftest_interval = 0;  // 0 disables the schedule
  Millis clock_tolerance = 2 * kSecond;
  Millis officer_session_expiry = 30 * kMinute;
};

struct PassphraseSlot {
  Component component;
  crypto::KeyPurpose which;
  bool entered = false;
};

struct OfficerSession {
  std::string session_id;
  std::string officer_id;
  Millis expires_at = 0;
};

struct MonitoringSnapshot {
  std::int64_t votes_stored = 0;
  std::int64_t voters_voted = 0;
  std::int64_t voters_session_active = 0;
  std::map<Component, std::string> health;  // "up" | "down"
  bool anomaly = false;
  Millis timestamp = 0;

  nlohmann::json ToJson() const;
};

struct SelfTestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelfTestReport {
  std::vector<SelfTestCheck> checks;
  std::string started_by;
  Millis timestamp = 0;

  bool passed() const;
  nlohmann::json ToJson() const;
};

struct AuthorizationResult {
  int remaining = 0;
  bool fired = false;
};

// Committee-tool: the lifecycle state machine with S-of-N authorization and
// everything the committee does to the other three components.
class CommitteeService final : public wire::ServiceBase {
 public:
  CommitteeService(crypto::Keyring& keyring, crypto::KeyDirectory directory,
                   ballotbox::Ballot ballot, const Clock& clock, wire::Transport& transport,
                   RandomSource& rng, CommitteeConfig config,
                   std::optional<std::filesystem::path> data_dir = std::nullopt);

  // The committee's own two passphrases, entered out of band at start.
  void Start(std::string_view comm_passphrase, std::string_view db_passphrase);
  bool online() const;

  OfficerSession Login(const std::string& officer_id, std::string_view password);
  void Logout(const std::string& session_id);
  // Officer id of a valid session; throws kPermissionDenied.
  std::string SessionOfficer(const std::string& session_id);

  ElectionState state() const;
  // Setup -> AwaitingStartAuthorization.
  void FinishSetup(const std::string& session_id);

  AuthorizationResult Authorize(const std::string& session_id, Action action);
  int RemainingApprovals(Action action) const;

  // Returns the number of slots still empty.
  int EnterPassphrase(const std::string& session_id, Component component,
                      crypto::KeyPurpose which, std::string_view passphrase);
  std::vector<PassphraseSlot> slots() const;

  // Drives the grace timer and the self-test schedule.
  void Poll();
  // Resumes a halted stop sequence.
  void RetryStopSequence(const std::string& session_id);
  bool stop_sequence_halted() const;
  std::optional<Millis> grace_deadline() const;

  // Tally fired by authorization; callable directly only in Stopped.
  void RunTally();
  bool low_turnout_hold() const;
  void AcknowledgeLowTurnout(const std::string& session_id);
  std::optional<ballotbox::TallyResult> result() const;

  MonitoringSnapshot Monitor();

  // Officer id, or "scheduler". Throws kBusy while another run is active.
  SelfTestReport RunSelfTest(const std::string& trigger);
  SelfTestReport RunSelfTestAsOfficer(const std::string& session_id);
  // Test probe: runs inside the self-test while it holds the run lock.
  void SetSelfTestProbe(std::function<void()> probe);

  std::vector<AuditEvent> GetAuditRecords(const std::string& session_id,
                                          std::optional<Component> component = std::nullopt,
                                          std::optional<AuditCategory> category = std::nullopt);

  void RecordSoftwareBaseline(const std::map<std::string, std::filesystem::path>& artifacts);
  void SetSoftwareBaseline(SoftwareBaseline baseline);
  std::optional<SoftwareBaseline> baseline() const;

  // Tallied -> Archived. Returns the signed archive bytes.
  Bytes BuildArchive(const std::string& session_id);

  wire::Json Handle(Component from, std::string_view type, const wire::Json& body) override;
  std::string DatabaseImage() const override;

 protected:
  void OnKeysUnlocked() override;

 private:
  std::string RequireSession(const std::string& session_id);
  void RequireState(ElectionState expected) const;
  void SetState(ElectionState s);
  wire::StateAttestation AttestLocked(Action action, const std::vector<std::string>& approvals);
  void Fire(Action action, const std::vector<std::string>& approvals);
  void ContinueStopSequence();
  void TallyLocked();
  void ClearLocked(const std::vector<std::string>& approvals);
  std::optional<wire::Json> CallOrMalfunction(Component to, std::string_view type,
                                              const wire::Json& body);
  void Persist(const wire::Json& record);

  crypto::KeyDirectory directory_;
  ballotbox::Ballot ballot_;
  wire::Transport& transport_;
  RandomSource& rng_;
  CommitteeConfig config_;

  // Serializes every lifecycle decision.
  mutable std::recursive_mutex mu_;
  bool online_ = false;
  ElectionState state_ = ElectionState::kSetup;
  std::map<std::string, OfficerSession> sessions_;
  std::map<Action, std::vector<std::string>> approvals_;
  std::vector<PassphraseSlot> slots_;
  std::optional<Millis> grace_deadline_;
  enum class StopStage { kNone, kValidatorOffline, kRegistryOffline, kBallotBoxStop, kDone };
  StopStage stop_stage_ = StopStage::kNone;
  bool stop_halted_ = false;
  std::vector<std::string> stop_approvals_;
  std::vector<std::string> tally_approvals_;
  bool low_turnout_hold_ = false;
  std::optional<ballotbox::TallyResult> result_;
  std::optional<SoftwareBaseline> baseline_;
  std::optional<BaselineReport> baseline_report_;
  std::unique_ptr<DurableLog> log_;

  std::mutex selftest_mu_;
  std::function<void()> selftest_probe_;
  std::optional<Millis> next_selftest_;
};

}  // namespace evote::committee

#endif  // EVOTE_COMMITTEE_COMMITTEE_SERVICE_H_
