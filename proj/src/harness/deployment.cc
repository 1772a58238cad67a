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

#include "evote/harness/deployment.h"

#include <set>

#include "evote/common/error.h"
#include "evote/credentials/signed_register.h"
#include "evote/harness/http_api.h"
#include "evote/wire/http.h"

namespace evote::harness {
namespace {

using wire::Json;

constexpr Component kRemotes[] = {Component::kRegistry, Component::kValidator,
                                  Component::kBallotBox};

// Calls the services directly, as the bus-mode stand-in for a browser.
class DirectVoterChannel final : public VoterChannel {
 public:
  DirectVoterChannel(registry::RegistryService& r, ballotbox::BallotBoxService& b)
      : registry_(r), box_(b) {}
  registry::LoginSession BeginLogin() override { return registry_.BeginLogin(); }
  registry::AuthOutcome Login(const std::string& session_id,
                              const std::vector<registry::Click>& id_clicks,
                              const std::vector<registry::Click>& password_clicks) override {
    return registry_.Login(session_id, id_clicks, password_clicks);
  }
  std::string Submit(const ballotbox::VoterToken& token,
                     const ballotbox::VoteContent& vote) override {
    return box_.SubmitVote(token, vote);
  }
  ballotbox::CastReceipt Confirm(const ballotbox::VoterToken& token) override {
    return box_.ConfirmVote(token);
  }
  void Cancel(const ballotbox::VoterToken& token) override { box_.Cancel(token); }

 private:
  registry::RegistryService& registry_;
  ballotbox::BallotBoxService& box_;
};

}  // namespace

// Loopback HTTP endpoints and transports for all four components.
class HttpCluster {
 public:
  std::map<Component, std::unique_ptr<wire::HttpTransport>> transports;
  std::map<Component, std::unique_ptr<wire::HttpEndpoint>> endpoints;
  std::map<Component, std::string> addresses;

  ~HttpCluster() {
    for (auto& [c, e] : endpoints) e->Stop();
  }
};

crypto::ComponentPassphrases HarnessPassphrases(Component c) {
  const std::string name(ComponentName(c));
  return {"harness-comm-" + name, "harness-db-" + name};
}

ballotbox::Ballot DefaultBallot() {
  ballotbox::Ballot b;
  b.ballot_id = "ballot-1";
  b.contests.push_back({"c1", {"a", "b", "c"}, 0, 1});
  return b;
}

void ElectionConfig::Check() const {
  ballot.Check();
  if (threshold < 2) throw Error(ErrorCode::kInvalidArgument, "threshold must be at least 2");
  std::set<std::string> ids;
  for (const auto& o : officers) {
    if (o.officer_id.empty() || !ids.insert(o.officer_id).second) {
      throw Error(ErrorCode::kInvalidArgument, "officer ids must be unique and non-empty");
    }
    if (o.password.empty() && o.password_hash.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "officer " + o.officer_id + " has no password");
    }
  }
  if (static_cast<int>(officers.size()) < threshold) {
    throw Error(ErrorCode::kInvalidArgument, "fewer officers than the threshold");
  }
  if (block_size == 0) throw Error(ErrorCode::kInvalidArgument, "block_size must be positive");
  if (grace_period < 0 || session_expiry <= 0 || selftest_interval < 0 ||
      low_turnout_threshold < 0) {
    throw Error(ErrorCode::kInvalidArgument, "durations and thresholds must be non-negative");
  }
  if (voters == 0) throw Error(ErrorCode::kInvalidArgument, "at least one voter is required");
}

Json ElectionConfig::ToJson() const {
  Json os = Json::array();
  for (const auto& o : officers) {
    Json entry = {{"id", o.officer_id}};
    if (!o.password.empty()) entry["password"] = o.password;
    if (!o.password_hash.empty()) entry["password_hash"] = o.password_hash;
    os.push_back(std::move(entry));
  }
  return {{"ballot", ballot.ToJson()},
          {"threshold", threshold},
          {"officers", os},
          {"block_size", block_size},
          {"grace_ms", grace_period},
          {"low_turnout_threshold", low_turnout_threshold},
          {"selftest_interval_ms", selftest_interval},
          {"session_expiry_ms", session_expiry},
          {"voters", voters}};
}

ElectionConfig ElectionConfig::FromJson(const Json& j) {
  static const std::set<std::string> kKnown = {
      "ballot", "threshold", "officers", "block_size", "grace_ms", "low_turnout_threshold",
      "selftest_interval_ms", "session_expiry_ms", "voters"};
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "config must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!kKnown.contains(k)) throw Error(ErrorCode::kInvalidArgument, "unknown config key " + k);
  }
  ElectionConfig c;
  try {
    c.ballot = j.contains("ballot") ? ballotbox::Ballot::FromJson(j.at("ballot")) : DefaultBallot();
    c.threshold = j.value("threshold", c.threshold);
    if (j.contains("officers")) {
      for (const auto& o : j.at("officers")) {
        c.officers.push_back({o.at("id").get<std::string>(), o.value("password", ""),
                              o.value("password_hash", "")});
      }
    } else {
      for (int i = 0; i < 3; ++i) {
        c.officers.push_back(
            {"officer" + std::to_string(i + 1), "officer-pass-" + std::to_string(i + 1), ""});
      }
    }
    c.block_size = j.value("block_size", c.block_size);
    c.grace_period = j.value("grace_ms", c.grace_period);
    c.low_turnout_threshold = j.value("low_turnout_threshold", c.low_turnout_threshold);
    c.selftest_interval = j.value("selftest_interval_ms", c.selftest_interval);
    c.session_expiry = j.value("session_expiry_ms", c.session_expiry);
    c.voters = j.value("voters", c.voters);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad config: ") + e.what());
  }
  c.Check();
  return c;
}

Deployment::Deployment(ElectionConfig config, std::uint64_t seed, TransportMode mode)
    : config_(std::move(config)), rng_(seed), bus_(&clock_) {
  config_.Check();
  for (const auto& o : config_.officers) {
    if (o.password.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "simulated officers need a password");
    }
  }
  std::uint64_t key_seed = seed * 1000003;
  for (Component c : kAllComponents) {
    clocks_[c] = std::make_unique<SkewedClock>(clock_);
    auto keys = crypto::GenerateComponentKeys(c, HarnessPassphrases(c), ++key_seed,
                                              crypto::KdfParams::Fast());
    directory_[c] = keys.publics;
    stored_keys_.emplace(c, keys);
    keyrings_[c] = std::make_unique<crypto::Keyring>(keys);
  }
  credentials_ = credentials::GenerateCredentials(config_.voters, {}, seed);
  {
    auto ers = crypto::UnlockPrivateKey(stored_keys_.at(Component::kRegistry).communication,
                                        HarnessPassphrases(Component::kRegistry).communication);
    auto vs = crypto::UnlockPrivateKey(stored_keys_.at(Component::kValidator).communication,
                                       HarnessPassphrases(Component::kValidator).communication);
    std::vector<credentials::CredentialRecord> records;
    for (const auto& c : credentials_) records.push_back(credentials::SignCredential(c, ers, vs));
    register_ = credentials::BuildSignedRegister(std::move(records), ers);
  }

  if (mode == TransportMode::kHttp) {
    http_ = std::make_unique<HttpCluster>();
    for (Component c : kAllComponents) {
      http_->transports[c] = std::make_unique<wire::HttpTransport>(c, keyring(c), directory_,
                                                                   clock_of(c));
      transports_[c] = http_->transports[c].get();
    }
  } else {
    for (Component c : kAllComponents) transports_[c] = &bus_.TransportFor(c);
  }

  validator_ = std::make_unique<validator::ValidatorService>(
      keyring(Component::kValidator), directory_, clock_of(Component::kValidator),
      validator::ValidatorConfig{config_.session_expiry});
  registry::RegistryConfig rc;
  rc.session_expiry = config_.session_expiry;
  registry_ = std::make_unique<registry::RegistryService>(
      keyring(Component::kRegistry), directory_, register_, clock_of(Component::kRegistry),
      *transports_.at(Component::kRegistry), rng_, rc);
  ballot_box_ = std::make_unique<ballotbox::BallotBoxService>(
      keyring(Component::kBallotBox), directory_, config_.ballot, clock_of(Component::kBallotBox),
      *transports_.at(Component::kBallotBox), ballotbox::BallotBoxConfig{config_.block_size});
  committee::CommitteeConfig cc;
  cc.threshold = config_.threshold;
  for (const auto& o : config_.officers) {
    cc.officers.push_back(
        {o.officer_id, committee::HashOfficerPassword(o.password, crypto::KdfParams::Fast())});
  }
  cc.low_turnout_threshold = config_.low_turnout_threshold;
  cc.grace_period = config_.grace_period;
  cc.selftest_interval = config_.selftest_interval;
  committee_ = std::make_unique<committee::CommitteeService>(
      keyring(Component::kCommittee), directory_, config_.ballot,
      clock_of(Component::kCommittee), *transports_.at(Component::kCommittee), rng_, cc);

  registry_->SetTraceSink([this](std::string_view e) {
    std::lock_guard lock(mu_);
    trace_.emplace_back(e);
  });
  ballot_box_->SetStepHook([this](std::string_view op, int step) {
    auto fault = bus_.faults().OnStep(op, step);
    if (!fault || fault->kind != wire::FaultKind::kCrash) return false;
    NoteCrash(Component::kBallotBox);
    return true;
  });
  Wire(mode);
}

Deployment::~Deployment() { http_.reset(); }

void Deployment::Wire(TransportMode mode) {
  std::map<Component, wire::ServiceBase*> services = {
      {Component::kRegistry, registry_.get()},
      {Component::kValidator, validator_.get()},
      {Component::kBallotBox, ballot_box_.get()},
      {Component::kCommittee, committee_.get()}};
  if (mode == TransportMode::kBus) {
    for (auto& [c, s] : services) bus_.Attach(c, *s, keyring(c), directory_, clock_of(c));
    bus_.SetCrashHandler([this](Component c) { NoteCrash(c); });
    voter_channel_ = std::make_unique<DirectVoterChannel>(*registry_, *ballot_box_);
    return;
  }
  for (auto& [c, s] : services) {
    auto endpoint = std::make_unique<wire::HttpEndpoint>(c, *s, keyring(c), directory_,
                                                         clock_of(c), s->audit());
    const int port = endpoint->Bind("127.0.0.1", 0);
    http_->addresses[c] = "127.0.0.1:" + std::to_string(port);
    http_->endpoints[c] = std::move(endpoint);
  }
  for (auto& [from, t] : http_->transports) {
    for (auto& [to, address] : http_->addresses) t->SetPeer(to, address);
  }
  InstallRegistryRoutes(*http_->endpoints[Component::kRegistry], *registry_);
  InstallBallotBoxRoutes(*http_->endpoints[Component::kBallotBox], *ballot_box_);
  InstallCommitteeRoutes(*http_->endpoints[Component::kCommittee], *committee_);
  for (auto& [c, e] : http_->endpoints) e->Start();
  voter_channel_ = std::make_unique<HttpVoterChannel>(http_->addresses[Component::kRegistry],
                                                      http_->addresses[Component::kBallotBox]);
}

SkewedClock& Deployment::clock_of(Component c) { return *clocks_.at(c); }

void Deployment::StartCommittee() {
  auto pp = HarnessPassphrases(Component::kCommittee);
  committee_->Start(pp.communication, pp.database);
  sessions_.clear();
  for (const auto& o : config_.officers) {
    sessions_.push_back(committee_->Login(o.officer_id, o.password).session_id);
  }
}

void Deployment::OpenElection() {
  committee_->FinishSetup(session(0));
  for (int i = 0; i < config_.threshold; ++i) committee_->Authorize(session(i), committee::Action::kStart);
  for (Component c : kRemotes) {
    auto pp = HarnessPassphrases(c);
    committee_->EnterPassphrase(session(0), c, crypto::KeyPurpose::kCommunication, pp.communication);
    committee_->EnterPassphrase(session(0), c, crypto::KeyPurpose::kDatabase, pp.database);
  }
}

void Deployment::AuthorizeStop() {
  for (int i = 0; i < config_.threshold; ++i) committee_->Authorize(session(i), committee::Action::kStop);
}

void Deployment::FinishStop() {
  auto deadline = committee_->grace_deadline();
  if (!deadline) throw Error(ErrorCode::kIllegalState, "no grace period running");
  AdvanceTo(*deadline);
}

ballotbox::TallyResult Deployment::Tally() {
  for (int i = 0; i < config_.threshold; ++i) {
    committee_->Authorize(session(i), committee::Action::kTally);
  }
  if (committee_->low_turnout_hold()) committee_->AcknowledgeLowTurnout(session(0));
  auto result = committee_->result();
  if (!result) throw Error(ErrorCode::kIllegalState, "tally produced no result");
  return *result;
}

Bytes Deployment::BuildArchive() { return committee_->BuildArchive(session(0)); }

registry::AuthOutcome Deployment::Login(const credentials::Credential& c) {
  registry::LoginSession s = voter_channel_->BeginLogin();
  return voter_channel_->Login(s.session_id, s.keyboard_layout.ClicksFor(c.voter_id),
                               s.keyboard_layout.ClicksFor(c.password));
}

ballotbox::VoterToken Deployment::TokenOf(const registry::AuthOutcome& outcome) {
  if (outcome.kind != registry::AuthOutcome::Kind::kTokenIssued) {
    throw Error(ErrorCode::kIllegalState, "no token issued");
  }
  return {outcome.token, outcome.token_signature};
}

void Deployment::Advance(Millis delta) {
  clock_.Advance(delta);
  PollAll();
}

void Deployment::AdvanceTo(Millis t) {
  if (t > clock_.Now()) clock_.Set(t);
  PollAll();
}

void Deployment::PollAll() {
  RestartCrashed();
  // Crashed components are restarted above; only bus mode marks them down.
  auto up = [&](Component c) { return http_ != nullptr || !bus_.IsDown(c); };
  if (up(Component::kValidator)) validator_->Poll();
  if (up(Component::kRegistry)) registry_->Poll();
  if (up(Component::kBallotBox)) ballot_box_->Poll();
  if (up(Component::kCommittee)) committee_->Poll();
  RestartCrashed();
}

void Deployment::SetFaults(wire::FaultPlan plan) { bus_.faults().SetPlan(std::move(plan)); }

void Deployment::NoteCrash(Component c) {
  {
    std::lock_guard lock(mu_);
    crashed_.push_back(c);
  }
  if (!http_) bus_.SetDown(c, true);
}

std::vector<Component> Deployment::RestartCrashed() {
  std::vector<Component> crashed;
  {
    std::lock_guard lock(mu_);
    crashed.swap(crashed_);
  }
  for (Component c : crashed) {
    if (!http_) bus_.SetDown(c, false);
    if (c == Component::kBallotBox) ballot_box_->Restart();
  }
  return crashed;
}

std::vector<std::string> Deployment::trace() const {
  std::lock_guard lock(mu_);
  return trace_;
}

std::vector<std::pair<Component, std::string>> Deployment::DurableStores() const {
  return {{Component::kRegistry, registry_->DatabaseImage()},
          {Component::kValidator, validator_->DatabaseImage()},
          {Component::kBallotBox, ballot_box_->DatabaseImage()},
          {Component::kCommittee, committee_->DatabaseImage()}};
}

std::vector<std::pair<Component, std::string>> Deployment::AuditLogs() const {
  return {{Component::kRegistry, registry_->audit().Serialize()},
          {Component::kValidator, validator_->audit().Serialize()},
          {Component::kBallotBox, ballot_box_->audit().Serialize()},
          {Component::kCommittee, committee_->audit().Serialize()}};
}

}  // namespace evote::harness
