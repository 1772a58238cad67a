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

#ifndef EVOTE_HARNESS_DEPLOYMENT_H_
#define EVOTE_HARNESS_DEPLOYMENT_H_

#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "evote/ballotbox/ballotbox_service.h"
#include "evote/committee/committee_service.h"
#include "evote/common/clock.h"
#include "evote/common/random.h"
#include "evote/credentials/credentials.h"
#include "evote/registry/registry_service.h"
#include "evote/validator/validator_service.h"
#include "evote/wire/bus.h"

namespace evote::harness {

// Served deployments may carry only the Argon2id string; simulations need
// the password itself to log officers in.
struct OfficerCredential {
  std::string officer_id;
  std::string password;
  std::string password_hash;
};

// Election configuration shared by simulations and the served deployment.
struct ElectionConfig {
  ballotbox::Ballot ballot;
  int threshold = 2;
  std::vector<OfficerCredential> officers;
  std::size_t block_size = ballotbox::kDefaultBlockSize;
  Millis grace_period = 600 * kSecond;
  std::int64_t low_turnout_threshold = 0;
  Millis selftest_interval = 0;
  Millis session_expiry = 15 * kMinute;
  std::size_t voters = 5;

  // Throws kInvalidArgument on an unusable configuration.
  void Check() const;
  nlohmann::json ToJson() const;
  static ElectionConfig FromJson(const nlohmann::json& j);
};

// Default single-contest ballot: options a, b, c.
ballotbox::Ballot DefaultBallot();

enum class TransportMode { kBus, kHttp };

// How a voter's browser reaches the registry and the ballot box.
class VoterChannel {
 public:
  virtual ~VoterChannel() = default;
  virtual registry::LoginSession BeginLogin() = 0;
  virtual registry::AuthOutcome Login(const std::string& session_id,
                                      const std::vector<registry::Click>& id_clicks,
                                      const std::vector<registry::Click>& password_clicks) = 0;
  virtual std::string Submit(const ballotbox::VoterToken& token,
                             const ballotbox::VoteContent& vote) = 0;
  virtual ballotbox::CastReceipt Confirm(const ballotbox::VoterToken& token) = 0;
  virtual void Cancel(const ballotbox::VoterToken& token) = 0;
};

class HttpCluster;

// All four components wired together under one simulated clock, with
// seeded keys, credentials and officers.
class Deployment {
 public:
  Deployment(ElectionConfig config, std::uint64_t seed,
             TransportMode mode = TransportMode::kBus);
  ~Deployment();
  Deployment(const Deployment&) = delete;
  Deployment& operator=(const Deployment&) = delete;

  const ElectionConfig& config() const { return config_; }
  SimClock& clock() { return clock_; }
  SkewedClock& clock_of(Component c);
  wire::Bus& bus() { return bus_; }
  registry::RegistryService& registry() { return *registry_; }
  validator::ValidatorService& validator() { return *validator_; }
  ballotbox::BallotBoxService& ballot_box() { return *ballot_box_; }
  committee::CommitteeService& committee() { return *committee_; }
  crypto::Keyring& keyring(Component c) { return *keyrings_.at(c); }
  const crypto::KeyDirectory& directory() const { return directory_; }
  const std::vector<credentials::Credential>& credentials() const { return credentials_; }
  const credentials::SignedRegister& signed_register() const { return register_; }
  VoterChannel& voters() { return *voter_channel_; }

  // Starts the committee tool and logs every officer in.
  void StartCommittee();
  const std::string& session(std::size_t officer) const { return sessions_.at(officer); }
  // Setup through the six passphrases to Voting.
  void OpenElection();
  // S stop approvals; the grace period starts.
  void AuthorizeStop();
  // Advances to the grace deadline and completes the stop sequence.
  void FinishStop();
  // S tally approvals, acknowledging a low-turnout warning if raised.
  ballotbox::TallyResult Tally();
  Bytes BuildArchive();

  // Full keyboard login for one credential.
  registry::AuthOutcome Login(const credentials::Credential& c);
  static ballotbox::VoterToken TokenOf(const registry::AuthOutcome& outcome);

  // Advances logical time by `delta` and polls every component.
  void Advance(Millis delta);
  void AdvanceTo(Millis t);
  void PollAll();

  // Installs a fault plan: message faults on the bus, step faults inside
  // the ballot box confirm.
  void SetFaults(wire::FaultPlan plan);
  // Restarts every component that crashed since the last call and returns
  // them. Keys stay unlocked across a simulated restart.
  std::vector<Component> RestartCrashed();
  void NoteCrash(Component c);

  // Registry protocol events, in order.
  std::vector<std::string> trace() const;
  // Every durable store, one snapshot per component.
  std::vector<std::pair<Component, std::string>> DurableStores() const;
  std::vector<std::pair<Component, std::string>> AuditLogs() const;

 private:
  void Wire(TransportMode mode);

  ElectionConfig config_;
  SimClock clock_;
  std::map<Component, std::unique_ptr<SkewedClock>> clocks_;
  SeededRandom rng_;
  crypto::KeyDirectory directory_;
  std::map<Component, crypto::ProtectedComponentKeys> stored_keys_;
  std::map<Component, std::unique_ptr<crypto::Keyring>> keyrings_;
  std::vector<credentials::Credential> credentials_;
  credentials::SignedRegister register_;
  wire::Bus bus_;
  std::unique_ptr<HttpCluster> http_;
  std::map<Component, wire::Transport*> transports_;
  std::unique_ptr<validator::ValidatorService> validator_;
  std::unique_ptr<registry::RegistryService> registry_;
  std::unique_ptr<ballotbox::BallotBoxService> ballot_box_;
  std::unique_ptr<committee::CommitteeService> committee_;
  std::unique_ptr<VoterChannel> voter_channel_;
  std::vector<std::string> sessions_;

  mutable std::mutex mu_;
  std::vector<std::string> trace_;
  std::vector<Component> crashed_;
};

// Passphrases the harness assigns to a component's keys.
crypto::ComponentPassphrases HarnessPassphrases(Component c);

}  // namespace evote::harness

#endif  // EVOTE_HARNESS_DEPLOYMENT_H_
