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

#include "evote/committee/committee_service.h"

#include <sodium.h>

#include <algorithm>
#include <cstdlib>
#include <set>

#include "evote/ballotbox/ballot.h"
#include "evote/committee/archive.h"
#include "evote/common/error.h"
#include "evote/wire/codec.h"

namespace evote::committee {
namespace {

using wire::Json;

constexpr Component kRemotes[] = {Component::kRegistry, Component::kValidator,
                                  Component::kBallotBox};

std::unique_ptr<DurableLog> OpenLog(const std::optional<std::filesystem::path>& path) {
  return path ? std::make_unique<DurableLog>(*path) : std::make_unique<DurableLog>();
}

}  // namespace

std::string_view ElectionStateName(ElectionState s) {
  switch (s) {
    case ElectionState::kSetup: return "Setup";
    case ElectionState::kAwaitingStartAuthorization: return "AwaitingStartAuthorization";
    case ElectionState::kAwaitingPassphrases: return "AwaitingPassphrases";
    case ElectionState::kVoting: return "Voting";
    case ElectionState::kGracePeriod: return "GracePeriod";
    case ElectionState::kStopped: return "Stopped";
    case ElectionState::kTallied: return "Tallied";
    case ElectionState::kArchived: return "Archived";
  }
  return "unknown";
}

std::string_view ActionName(Action a) {
  switch (a) {
    case Action::kStart: return "start";
    case Action::kStop: return "stop";
    case Action::kTally: return "tally";
    case Action::kClear: return "clear";
  }
  return "unknown";
}

Action ActionFromName(std::string_view name) {
  for (Action a : {Action::kStart, Action::kStop, Action::kTally, Action::kClear}) {
    if (ActionName(a) == name) return a;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown action");
}

std::string HashOfficerPassword(std::string_view password, crypto::KdfParams kdf) {
  char out[crypto_pwhash_STRBYTES];
  if (crypto_pwhash_str(out, password.data(), password.size(), kdf.opslimit, kdf.memlimit) != 0) {
    throw Error(ErrorCode::kEntropy, "password hashing failed");
  }
  return out;
}

Json MonitoringSnapshot::ToJson() const {
  Json h = Json::object();
  for (const auto& [c, s] : health) h[std::string(ComponentName(c))] = s;
  return Json{{"votes_stored", votes_stored},
              {"voters_voted", voters_voted},
              {"voters_session_active", voters_session_active},
              {"health", h},
              {"anomaly", anomaly},
              {"timestamp", timestamp}};
}

bool SelfTestReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

Json SelfTestReport::ToJson() const {
  Json cs = Json::array();
  for (const auto& c : checks) {
    cs.push_back({{"name", c.name}, {"outcome", c.passed ? "pass" : "fail"}, {"detail", c.detail}});
  }
  return Json{{"checks", cs}, {"started_by", started_by}, {"timestamp", timestamp},
              {"passed", passed()}};
}

CommitteeService::CommitteeService(crypto::Keyring& keyring, crypto::KeyDirectory directory,
                                   ballotbox::Ballot ballot, const Clock& clock,
                                   wire::Transport& transport, RandomSource& rng,
                                   CommitteeConfig config,
                                   std::optional<std::filesystem::path> data_dir)
    : ServiceBase(Component::kCommittee, keyring, clock, data_dir),
      directory_(std::move(directory)),
      ballot_(std::move(ballot)),
      transport_(transport),
      rng_(rng),
      config_(std::move(config)),
      log_(OpenLog(DataPath("committee.log"))) {
  if (config_.threshold < 2) throw Error(ErrorCode::kInvalidArgument, "S must be greater than 1");
  std::set<std::string> ids;
  for (const auto& o : config_.officers) {
    if (!IsRedactionSafe("officer=" + o.officer_id) || !ids.insert(o.officer_id).second) {
      throw Error(ErrorCode::kInvalidArgument, "bad or duplicate officer id");
    }
  }
  if (static_cast<int>(ids.size()) < config_.threshold) {
    throw Error(ErrorCode::kInvalidArgument, "fewer officers than S");
  }
  ballot_.Check();
}

void CommitteeService::Start(std::string_view comm_passphrase, std::string_view db_passphrase) {
  UnlockSlot(crypto::KeyPurpose::kCommunication, comm_passphrase);
  UnlockSlot(crypto::KeyPurpose::kDatabase, db_passphrase);
}

void CommitteeService::OnKeysUnlocked() {
  std::lock_guard lock(mu_);
  online_ = true;
  if (config_.selftest_interval > 0) next_selftest_ = clock().Now() + config_.selftest_interval;
}

bool CommitteeService::online() const {
  std::lock_guard lock(mu_);
  return online_;
}

OfficerSession CommitteeService::Login(const std::string& officer_id, std::string_view password) {
  std::lock_guard lock(mu_);
  if (!online_) throw Error(ErrorCode::kUnavailable, "committee tool not started");
  const Officer* officer = nullptr;
  for (const auto& o : config_.officers) {
    if (o.officer_id == officer_id) officer = &o;
  }
  if (officer == nullptr ||
      crypto_pwhash_str_verify(officer->password_hash.c_str(), password.data(), password.size()) !=
          0) {
    audit().Record(AuditCategory::kOfficerAuth, {{"event", "login"}, {"outcome", "failed"}});
    throw Error(ErrorCode::kPermissionDenied, "authentication failed");
  }
  OfficerSession s;
  s.session_id = HexEncode(rng_.Generate(16));
  s.officer_id = officer_id;
  s.expires_at = clock().Now() + config_.officer_session_expiry;
  sessions_[s.session_id] = s;
  audit().Record(AuditCategory::kOfficerAuth,
                 {{"event", "login"}, {"outcome", "ok"}, {"officer", officer_id}});
  return s;
}

void CommitteeService::Logout(const std::string& session_id) {
  std::lock_guard lock(mu_);
  sessions_.erase(session_id);
}

std::string CommitteeService::SessionOfficer(const std::string& session_id) {
  return RequireSession(session_id);
}

std::string CommitteeService::RequireSession(const std::string& session_id) {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end() || clock().Now() >= it->second.expires_at) {
    if (it != sessions_.end()) sessions_.erase(it);
    throw Error(ErrorCode::kPermissionDenied, "no valid officer session");
  }
  return it->second.officer_id;
}

ElectionState CommitteeService::state() const {
  std::lock_guard lock(mu_);
  return state_;
}

void CommitteeService::RequireState(ElectionState expected) const {
  if (state_ != expected) {
    throw Error(ErrorCode::kIllegalState,
                "operation not allowed in state " + std::string(ElectionStateName(state_)));
  }
}

void CommitteeService::SetState(ElectionState s) {
  state_ = s;
  Persist(Json{{"type", "state"}, {"state", ElectionStateName(s)}});
}

void CommitteeService::Persist(const Json& record) {
  log_->Append(AsBytes(record.dump()));
  log_->Flush();
}

void CommitteeService::FinishSetup(const std::string& session_id) {
  std::lock_guard lock(mu_);
  RequireSession(session_id);
  RequireState(ElectionState::kSetup);
  SetState(ElectionState::kAwaitingStartAuthorization);
}

int CommitteeService::RemainingApprovals(Action action) const {
  std::lock_guard lock(mu_);
  auto it = approvals_.find(action);
  const int have = it == approvals_.end() ? 0 : static_cast<int>(it->second.size());
  return config_.threshold - have;
}

AuthorizationResult CommitteeService::Authorize(const std::string& session_id, Action action) {
  std::lock_guard lock(mu_);
  const std::string officer = RequireSession(session_id);
  switch (action) {
    case Action::kStart: RequireState(ElectionState::kAwaitingStartAuthorization); break;
    case Action::kStop: RequireState(ElectionState::kVoting); break;
    case Action::kTally:
      RequireState(ElectionState::kStopped);
      if (stop_halted_) throw Error(ErrorCode::kIllegalState, "stop sequence incomplete");
      if (low_turnout_hold_) throw Error(ErrorCode::kIllegalState, "low turnout not acknowledged");
      break;
    case Action::kClear: RequireState(ElectionState::kStopped); break;
  }
  auto& ledger = approvals_[action];
  if (std::find(ledger.begin(), ledger.end(), officer) != ledger.end()) {
    throw Error(ErrorCode::kAlreadyExists, "officer already approved this action");
  }
  ledger.push_back(officer);
  const int remaining = config_.threshold - static_cast<int>(ledger.size());
  audit().Record(AuditCategory::kOfficerAuth, AuditDetail{{"event", "authorization"},
                                                          {"officer", officer},
                                                          {"action", std::string(ActionName(action))}}
                                                  .Add("remaining", remaining));
  if (remaining > 0) return {remaining, false};
  std::vector<std::string> approvals = std::move(ledger);
  approvals_.erase(action);
  Fire(action, approvals);
  return {0, true};
}

void CommitteeService::Fire(Action action, const std::vector<std::string>& approvals) {
  switch (action) {
    case Action::kStart:
      slots_.clear();
      for (Component c : kRemotes) {
        slots_.push_back({c, crypto::KeyPurpose::kCommunication, false});
        slots_.push_back({c, crypto::KeyPurpose::kDatabase, false});
      }
      SetState(ElectionState::kAwaitingPassphrases);
      audit().Record(AuditCategory::kPollStart, {{"event", "start_authorized"}});
      return;
    case Action::kStop:
      stop_approvals_ = approvals;
      stop_stage_ = StopStage::kValidatorOffline;
      stop_halted_ = false;
      audit().Record(AuditCategory::kPollStop, {{"event", "stop_authorized"}});
      ContinueStopSequence();
      return;
    case Action::kTally:
      tally_approvals_ = approvals;
      TallyLocked();
      return;
    case Action::kClear:
      ClearLocked(approvals);
      return;
  }
}

int CommitteeService::EnterPassphrase(const std::string& session_id, Component component,
                                      crypto::KeyPurpose which, std::string_view passphrase) {
  std::lock_guard lock(mu_);
  const std::string officer = RequireSession(session_id);
  RequireState(ElectionState::kAwaitingPassphrases);
  auto slot = std::find_if(slots_.begin(), slots_.end(), [&](const PassphraseSlot& s) {
    return s.component == component && s.which == which;
  });
  if (slot == slots_.end()) throw Error(ErrorCode::kInvalidArgument, "no such passphrase slot");
  if (slot->entered) throw Error(ErrorCode::kAlreadyExists, "slot already filled");
  try {
    transport_.Call(component, "unlock",
                    {{"slot", crypto::KeyPurposeName(which)},
                     {"passphrase", wire::SealValue(directory_.at(component).https,
                                                    AsBytes(passphrase))}});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kWrongPassphrase) {
      audit().Record(AuditCategory::kMalfunction,
                     {{"event", "component_start_failed"},
                      {"component", std::string(ComponentName(component))},
                      {"code", std::string(ErrorCodeName(e.code()))}});
    }
    throw;
  }
  slot->entered = true;
  audit().Record(AuditCategory::kOfficerAuth,
                 {{"event", "passphrase_entered"},
                  {"officer", officer},
                  {"component", std::string(ComponentName(component))},
                  {"slot", std::string(crypto::KeyPurposeName(which))}});
  const int remaining = static_cast<int>(
      std::count_if(slots_.begin(), slots_.end(), [](const auto& s) { return !s.entered; }));
  if (remaining == 0) {
    SetState(ElectionState::kVoting);
    audit().Record(AuditCategory::kPollStart, {{"event", "voting_started"}});
  }
  return remaining;
}

std::vector<PassphraseSlot> CommitteeService::slots() const {
  std::lock_guard lock(mu_);
  return slots_;
}

std::optional<Json> CommitteeService::CallOrMalfunction(Component to, std::string_view type,
                                                         const Json& body) {
  try {
    return transport_.Call(to, type, body);
  } catch (const Error& e) {
    audit().Record(AuditCategory::kMalfunction,
                   {{"event", "component_call_failed"},
                    {"component", std::string(ComponentName(to))},
                    {"type", std::string(type)},
                    {"code", std::string(ErrorCodeName(e.code()))}});
    return std::nullopt;
  }
}

wire::StateAttestation CommitteeService::AttestLocked(Action action,
                                                      const std::vector<std::string>& approvals) {
  return wire::Attest("Stopped", std::string(ActionName(action)), approvals, config_.threshold,
                      clock().Now(), keyring().Communication());
}

void CommitteeService::ContinueStopSequence() {
  auto halt = [&](Component c) {
    stop_halted_ = true;
    audit().Record(AuditCategory::kMalfunction,
                   {{"event", "stop_sequence_halted"}, {"component", std::string(ComponentName(c))}});
  };
  if (stop_stage_ == StopStage::kValidatorOffline) {
    if (!CallOrMalfunction(Component::kValidator, "go_offline", Json::object())) {
      return halt(Component::kValidator);
    }
    SetState(ElectionState::kGracePeriod);
    grace_deadline_ = clock().Now() + config_.grace_period;
    stop_stage_ = StopStage::kRegistryOffline;
    audit().Record(AuditCategory::kPollStop, AuditDetail{{"event", "validator_offline"}}.Add(
                                                 "grace_ms", config_.grace_period));
    return;
  }
  if (stop_stage_ == StopStage::kRegistryOffline) {
    if (clock().Now() < *grace_deadline_) return;
    if (!CallOrMalfunction(Component::kRegistry, "go_offline", Json::object())) {
      return halt(Component::kRegistry);
    }
    SetState(ElectionState::kStopped);
    stop_stage_ = StopStage::kBallotBoxStop;
    audit().Record(AuditCategory::kPollStop, {{"event", "registry_offline"}});
  }
  if (stop_stage_ == StopStage::kBallotBoxStop) {
    auto att = AttestLocked(Action::kStop, stop_approvals_);
    if (!CallOrMalfunction(Component::kBallotBox, "stop", {{"attestation", att.ToJson()}})) {
      return halt(Component::kBallotBox);
    }
    stop_stage_ = StopStage::kDone;
    audit().Record(AuditCategory::kPollStop, {{"event", "election_stopped"}});
  }
}

void CommitteeService::RetryStopSequence(const std::string& session_id) {
  std::lock_guard lock(mu_);
  RequireSession(session_id);
  if (!stop_halted_) throw Error(ErrorCode::kIllegalState, "stop sequence is not halted");
  stop_halted_ = false;
  ContinueStopSequence();
}

bool CommitteeService::stop_sequence_halted() const {
  std::lock_guard lock(mu_);
  return stop_halted_;
}

std::optional<Millis> CommitteeService::grace_deadline() const {
  std::lock_guard lock(mu_);
  return grace_deadline_;
}

void CommitteeService::Poll() {
  bool run_selftest = false;
  {
    std::lock_guard lock(mu_);
    if (state_ == ElectionState::kGracePeriod && stop_stage_ == StopStage::kRegistryOffline &&
        !stop_halted_) {
      ContinueStopSequence();
    }
    const Millis now = clock().Now();
    if (next_selftest_ && now >= *next_selftest_) {
      run_selftest = true;
      while (*next_selftest_ <= now) *next_selftest_ += config_.selftest_interval;
    }
  }
  if (run_selftest) {
    try {
      RunSelfTest("scheduler");
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBusy) throw;
    }
  }
}

void CommitteeService::RunTally() {
  std::lock_guard lock(mu_);
  TallyLocked();
}

void CommitteeService::TallyLocked() {
  RequireState(ElectionState::kStopped);
  if (stop_halted_ || stop_stage_ != StopStage::kDone) {
    throw Error(ErrorCode::kIllegalState, "stop sequence incomplete");
  }
  if (!low_turnout_hold_) {
    auto counts = CallOrMalfunction(Component::kBallotBox, "counts", Json::object());
    if (!counts) throw Error(ErrorCode::kUnavailable, "ballot box unreachable");
    const std::int64_t stored = wire::IntField(*counts, "stored");
    if (stored < config_.low_turnout_threshold) {
      low_turnout_hold_ = true;
      audit().Record(AuditCategory::kTallyStartAndResult,
                     AuditDetail{{"event", "low_turnout_warning"}}
                         .Add("votes", stored)
                         .Add("threshold", config_.low_turnout_threshold));
      return;
    }
  }
  low_turnout_hold_ = false;
  audit().Record(AuditCategory::kTallyStartAndResult, {{"event", "tally_requested"}});
  auto att = AttestLocked(Action::kTally, tally_approvals_);
  Json reply;
  try {
    reply = transport_.Call(Component::kBallotBox, "tally", {{"attestation", att.ToJson()}});
  } catch (const Error& e) {
    audit().Record(AuditCategory::kMalfunction,
                   {{"event", e.code() == ErrorCode::kVerificationFailed ? "tamper_detected"
                                                                         : "tally_failed"},
                    {"code", std::string(ErrorCodeName(e.code()))}});
    throw;
  }
  ballotbox::TallyResult r = ballotbox::TallyResult::FromJson(reply);
  if (!ballotbox::VerifyTally(r, directory_.at(Component::kBallotBox).communication)) {
    audit().Record(AuditCategory::kMalfunction, {{"event", "result_signature_invalid"}});
    throw Error(ErrorCode::kVerificationFailed, "tally result signature invalid");
  }
  result_ = r;
  Persist(Json{{"type", "result"}, {"result", r.ToJson()}});
  SetState(ElectionState::kTallied);
  audit().Record(AuditCategory::kTallyStartAndResult,
                 AuditDetail{{"event", "tally_result"}}.Add("total", r.total_votes));
}

bool CommitteeService::low_turnout_hold() const {
  std::lock_guard lock(mu_);
  return low_turnout_hold_;
}

void CommitteeService::AcknowledgeLowTurnout(const std::string& session_id) {
  std::lock_guard lock(mu_);
  const std::string officer = RequireSession(session_id);
  if (!low_turnout_hold_) throw Error(ErrorCode::kIllegalState, "no low-turnout warning pending");
  audit().Record(AuditCategory::kOfficerAuth,
                 {{"event", "low_turnout_acknowledged"}, {"officer", officer}});
  TallyLocked();
}

std::optional<ballotbox::TallyResult> CommitteeService::result() const {
  std::lock_guard lock(mu_);
  return result_;
}

void CommitteeService::ClearLocked(const std::vector<std::string>& approvals) {
  auto att = AttestLocked(Action::kClear, approvals);
  if (!CallOrMalfunction(Component::kBallotBox, "clear_votes", {{"attestation", att.ToJson()}})) {
    throw Error(ErrorCode::kUnavailable, "ballot box could not be cleared");
  }
  for (Component c : {Component::kRegistry, Component::kValidator}) {
    if (!CallOrMalfunction(c, "reset_election", Json::object())) {
      throw Error(ErrorCode::kUnavailable, "component could not be reset");
    }
  }
  slots_.clear();
  approvals_.clear();
  grace_deadline_.reset();
  stop_stage_ = StopStage::kNone;
  stop_halted_ = false;
  stop_approvals_.clear();
  tally_approvals_.clear();
  low_turnout_hold_ = false;
  result_.reset();
  SetState(ElectionState::kSetup);
  audit().Record(AuditCategory::kPollStop, {{"event", "votes_cleared"}});
}

MonitoringSnapshot CommitteeService::Monitor() {
  MonitoringSnapshot snap;
  snap.timestamp = clock().Now();
  snap.health[Component::kCommittee] = "up";
  for (Component c : kRemotes) {
    auto h = CallOrMalfunction(c, "health", Json::object());
    snap.health[c] = h && h->value("status", "") == "up" ? "up" : "down";
  }
  auto ers = CallOrMalfunction(Component::kRegistry, "counts", Json::object());
  auto bbs = CallOrMalfunction(Component::kBallotBox, "counts", Json::object());
  if (ers) {
    snap.voters_voted = wire::IntField(*ers, "voted");
    snap.voters_session_active = wire::IntField(*ers, "session_active");
  }
  if (bbs) snap.votes_stored = wire::IntField(*bbs, "stored");
  if (ers && bbs &&
      std::llabs(snap.votes_stored - snap.voters_voted) > snap.voters_session_active) {
    snap.anomaly = true;
    audit().Record(AuditCategory::kMalfunction, AuditDetail{{"event", "vote_count_anomaly"}}
                                                    .Add("votes", snap.votes_stored)
                                                    .Add("voters", snap.voters_voted)
                                                    .Add("active", snap.voters_session_active));
  }
  return snap;
}

void CommitteeService::SetSelfTestProbe(std::function<void()> probe) {
  std::lock_guard lock(mu_);
  selftest_probe_ = std::move(probe);
}

SelfTestReport CommitteeService::RunSelfTestAsOfficer(const std::string& session_id) {
  return RunSelfTest(RequireSession(session_id));
}

SelfTestReport CommitteeService::RunSelfTest(const std::string& trigger) {
  std::unique_lock run(selftest_mu_, std::try_to_lock);
  if (!run.owns_lock()) throw Error(ErrorCode::kBusy, "a self-test is already running");
  std::function<void()> probe;
  {
    std::lock_guard lock(mu_);
    probe = selftest_probe_;
  }
  if (probe) probe();

  SelfTestReport report;
  report.started_by = trigger;
  report.timestamp = clock().Now();
  std::map<Component, Json> health;
  std::vector<std::string> unreachable;
  for (Component c : kRemotes) {
    try {
      health[c] = transport_.Call(c, "health", Json::object());
    } catch (const Error&) {
      unreachable.emplace_back(ComponentName(c));
    }
  }
  auto join = [](const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
    return out;
  };

  std::vector<std::string> down;
  for (const auto& [c, h] : health) {
    if (h.value("status", "") != "up") down.emplace_back(ComponentName(c));
  }
  down.insert(down.end(), unreachable.begin(), unreachable.end());
  report.checks.push_back({"hardware", down.empty(), down.empty() ? "all up" : join(down)});

  std::vector<std::string> bad_storage;
  if (!StorageIntact()) bad_storage.emplace_back(ComponentName(Component::kCommittee));
  for (const auto& [c, h] : health) {
    if (!h.value("storage_ok", false)) bad_storage.emplace_back(ComponentName(c));
  }
  report.checks.push_back({"storage_integrity", bad_storage.empty() && unreachable.empty(),
                           bad_storage.empty() ? "ok" : join(bad_storage)});

  std::vector<std::string> skewed;
  const Millis now = clock().Now();
  for (const auto& [c, h] : health) {
    const Millis t = h.value("time", Millis{0});
    if (std::llabs(t - now) > config_.clock_tolerance) skewed.emplace_back(ComponentName(c));
  }
  report.checks.push_back({"system_time", skewed.empty() && unreachable.empty(),
                           skewed.empty() ? "within tolerance" : join(skewed)});

  bool anomaly_ok = false;
  std::string anomaly_detail = "counts unavailable";
  try {
    Json ers = transport_.Call(Component::kRegistry, "counts", Json::object());
    Json bbs = transport_.Call(Component::kBallotBox, "counts", Json::object());
    const auto stored = wire::IntField(bbs, "stored");
    const auto voted = wire::IntField(ers, "voted");
    const auto active = wire::IntField(ers, "session_active");
    anomaly_ok = std::llabs(stored - voted) <= active;
    anomaly_detail = "stored " + std::to_string(stored) + " voted " + std::to_string(voted) +
                     " active " + std::to_string(active);
  } catch (const Error&) {
  }
  report.checks.push_back({"vote_count_anomaly", anomaly_ok, anomaly_detail});
  report.checks.push_back({"network", unreachable.empty(),
                           unreachable.empty() ? "all reachable" : join(unreachable)});

  std::vector<std::string> failed;
  for (const auto& c : report.checks) {
    if (!c.passed) failed.push_back(c.name);
  }
  AuditDetail d{{"event", "selftest"}, {"trigger", trigger},
                {"outcome", failed.empty() ? "pass" : "fail"}};
  if (!failed.empty()) d.Add("failed", join(failed));
  audit().Record(AuditCategory::kSelftestResult, d);
  for (const auto& f : failed) {
    audit().Record(AuditCategory::kMalfunction, {{"event", "selftest_failure"}, {"check", f}});
  }
  return report;
}

std::vector<AuditEvent> CommitteeService::GetAuditRecords(const std::string& session_id,
                                                          std::optional<Component> component,
                                                          std::optional<AuditCategory> category) {
  RequireSession(session_id);
  std::vector<AuditEvent> all = audit().Events();
  for (Component c : kRemotes) {
    if (component && *component != c) continue;
    auto reply = CallOrMalfunction(c, "audit_log", Json::object());
    if (!reply) continue;
    auto events = AuditLog::Parse(wire::StringField(*reply, "log"));
    all.insert(all.end(), events.begin(), events.end());
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const AuditEvent& a, const AuditEvent& b) { return a.timestamp < b.timestamp; });
  std::vector<AuditEvent> out;
  for (auto& e : all) {
    if (component && e.component != *component) continue;
    if (category && e.category != *category) continue;
    out.push_back(std::move(e));
  }
  return out;
}

void CommitteeService::RecordSoftwareBaseline(
    const std::map<std::string, std::filesystem::path>& artifacts) {
  std::lock_guard lock(mu_);
  RequireState(ElectionState::kSetup);
  baseline_ = RecordBaseline(artifacts, clock().Now(), keyring().Communication());
  Persist(Json{{"type", "baseline"}, {"baseline", baseline_->ToJson()}});
}

void CommitteeService::SetSoftwareBaseline(SoftwareBaseline baseline) {
  std::lock_guard lock(mu_);
  RequireState(ElectionState::kSetup);
  if (!crypto::Verify(keyring().publics().communication, baseline.SignedBytes(),
                      baseline.signature)) {
    throw Error(ErrorCode::kVerificationFailed, "baseline signature invalid");
  }
  baseline_ = std::move(baseline);
  Persist(Json{{"type", "baseline"}, {"baseline", baseline_->ToJson()}});
}

std::optional<SoftwareBaseline> CommitteeService::baseline() const {
  std::lock_guard lock(mu_);
  return baseline_;
}

Bytes CommitteeService::BuildArchive(const std::string& session_id) {
  std::lock_guard lock(mu_);
  RequireSession(session_id);
  RequireState(ElectionState::kTallied);

  Json software;
  if (baseline_) {
    BaselineReport report = VerifyBaseline(*baseline_, keyring().publics().communication);
    for (const auto& name : report.Mismatches()) {
      audit().Record(AuditCategory::kMalfunction,
                     {{"event", "software_signature_mismatch"}, {"artifact", name}});
    }
    if (!report.signature_ok) {
      audit().Record(AuditCategory::kMalfunction, {{"event", "baseline_signature_invalid"}});
    }
    software = {{"baseline", baseline_->ToJson()}, {"verification", report.ToJson()}};
  } else {
    audit().Record(AuditCategory::kMalfunction, {{"event", "software_baseline_missing"}});
    software = {{"baseline", nullptr}, {"verification", {{"ok", false}}}};
  }

  auto fetch = [&](Component c, std::string_view type, const char* field) {
    auto reply = CallOrMalfunction(c, type, Json::object());
    if (!reply) throw Error(ErrorCode::kUnavailable, "archive member unavailable");
    return wire::Field(*reply, field);
  };

  std::vector<ArchiveMember> members;
  members.push_back({"tally_result.json", ToBytes(result_->ToJson().dump(1))});
  members.push_back({"electoral_register.txt",
                     ToBytes(fetch(Component::kRegistry, "electoral_register", "register")
                                 .get<std::string>())});
  members.push_back({"software_report.json", ToBytes(software.dump(1))});
  for (Component c : kRemotes) {
    members.push_back({"db/" + std::string(ComponentName(c)) + ".img",
                       wire::DecodeBytes(fetch(c, "database_image", "image"))});
  }
  members.push_back({"db/committee.img", ToBytes(DatabaseImage())});
  for (Component c : kRemotes) {
    members.push_back({"audit/" + std::string(ComponentName(c)) + ".log",
                       ToBytes(fetch(c, "audit_log", "log").get<std::string>())});
  }
  audit().Record(AuditCategory::kTallyStartAndResult, {{"event", "archive_built"}});
  members.push_back({"audit/committee.log", ToBytes(audit().Serialize())});

  Bytes archive = committee::BuildArchive(members, keyring().Communication());
  SetState(ElectionState::kArchived);
  return archive;
}

Json CommitteeService::Handle(Component from, std::string_view type, const Json& body) {
  if (auto common = HandleCommon(from, type, body)) return *common;
  throw Error(ErrorCode::kNotFound, "unknown message type");
}

std::string CommitteeService::DatabaseImage() const { return ToString(log_->Image()); }

}  // namespace evote::committee
