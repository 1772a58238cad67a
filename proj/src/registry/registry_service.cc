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

#include "evote/registry/registry_service.h"

#include "evote/common/error.h"
#include "evote/crypto/erase.h"
#include "evote/validator/validator_service.h"
#include "evote/wire/codec.h"

namespace evote::registry {
namespace {

using wire::Json;

constexpr std::size_t kTokenSize = 32;

std::unique_ptr<DurableLog> OpenLog(const std::optional<std::filesystem::path>& path) {
  return path ? std::make_unique<DurableLog>(*path) : std::make_unique<DurableLog>();
}

}  // namespace

std::string_view VoterStateName(VoterState s) {
  switch (s) {
    case VoterState::kEligible: return "eligible";
    case VoterState::kSessionActive: return "session_active";
    case VoterState::kVoted: return "voted";
  }
  return "unknown";
}

RegistryService::RegistryService(crypto::Keyring& keyring, crypto::KeyDirectory directory,
                                 credentials::SignedRegister reg, const Clock& clock,
                                 wire::Transport& transport, RandomSource& rng,
                                 RegistryConfig config,
                                 std::optional<std::filesystem::path> data_dir)
    : ServiceBase(Component::kRegistry, keyring, clock, data_dir),
      directory_(std::move(directory)),
      register_(std::move(reg)),
      transport_(transport),
      rng_(rng),
      config_(std::move(config)),
      log_(OpenLog(DataPath("voted.log"))) {
  for (const auto& r : register_.records) voters_[r.voter_id];
  for (const auto& rec : log_->Records()) {
    Json j = Json::parse(ToString(rec));
    if (j.at("type") == "reset") {
      for (auto& [id, v] : voters_) v.state = VoterState::kEligible;
    } else if (j.at("type") == "voted") {
      auto it = voters_.find(j.at("id").get<std::string>());
      if (it != voters_.end()) it->second.state = VoterState::kVoted;
    }
  }
}

void RegistryService::BringOnline(std::string_view comm_passphrase,
                                  std::string_view db_passphrase) {
  UnlockSlot(crypto::KeyPurpose::kCommunication, comm_passphrase);
  UnlockSlot(crypto::KeyPurpose::kDatabase, db_passphrase);
}

void RegistryService::OnKeysUnlocked() {
  auto report = credentials::VerifyRegister(register_,
                                            directory_.at(Component::kRegistry).communication,
                                            directory_.at(Component::kValidator).communication);
  if (!report.ok()) {
    audit().Record(AuditCategory::kMalfunction, {{"event", "register_verification_failed"}});
    throw Error(ErrorCode::kVerificationFailed, "electoral register does not verify");
  }
  std::lock_guard lock(mu_);
  online_ = true;
  audit().Record(AuditCategory::kPollStart, {{"event", "registry_online"}});
}

bool RegistryService::online() const {
  std::lock_guard lock(mu_);
  return online_;
}

LoginSession RegistryService::BeginLogin() {
  std::lock_guard lock(mu_);
  if (!online_) throw Error(ErrorCode::kUnavailable, "registry offline");
  LoginSession s;
  s.session_id = HexEncode(rng_.Generate(16));
  s.keyboard_layout = KeyboardLayout::Shuffled(config_.keyboard_alphabet, rng_);
  s.created_at = clock().Now();
  s.expires_at = s.created_at + config_.login_expiry;
  logins_[s.session_id] = s;
  return s;
}

std::string RegistryService::DecodeCoordinates(const std::string& session_id,
                                               const std::vector<Click>& clicks) {
  std::lock_guard lock(mu_);
  auto it = logins_.find(session_id);
  if (it == logins_.end() || clock().Now() >= it->second.expires_at) {
    throw Error(ErrorCode::kNotFound, "unknown or expired login session");
  }
  return it->second.keyboard_layout.Decode(clicks);
}

AuthOutcome RegistryService::Login(const std::string& session_id,
                                   const std::vector<Click>& id_clicks,
                                   const std::vector<Click>& password_clicks) {
  KeyboardLayout layout;
  {
    std::lock_guard lock(mu_);
    auto it = logins_.find(session_id);
    if (it == logins_.end() || clock().Now() >= it->second.expires_at) {
      if (it != logins_.end()) logins_.erase(it);
      throw Error(ErrorCode::kNotFound, "unknown or expired login session");
    }
    layout = std::move(it->second.keyboard_layout);
    logins_.erase(it);
  }
  std::string voter_id = layout.Decode(id_clicks);
  std::string password = layout.Decode(password_clicks);
  AuthOutcome out = Authenticate(voter_id, password);
  crypto::SecureErase({reinterpret_cast<std::uint8_t*>(password.data()), password.size()});
  return out;
}

AuthOutcome RegistryService::Authenticate(const std::string& voter_id,
                                          const std::string& password) {
  AuthOutcome rejected;
  const credentials::CredentialRecord* record = nullptr;
  {
    std::lock_guard lock(mu_);
    if (!online_) throw Error(ErrorCode::kUnavailable, "registry offline");
    record = register_.Find(voter_id);
    if (record == nullptr) return rejected;
    auto hash = crypto::HashBytes(password);
    if (!ConstantTimeEquals(hash.view(), record->pw_hash.view())) return rejected;
    Voter& v = voters_.at(voter_id);
    if (v.state == VoterState::kVoted) {
      AuthOutcome out;
      out.kind = AuthOutcome::Kind::kAlreadyVoted;
      return out;
    }
    if (v.state == VoterState::kSessionActive || v.authenticating) return rejected;
    v.authenticating = true;
  }
  auto clear_flag = [&] {
    std::lock_guard lock(mu_);
    voters_.at(voter_id).authenticating = false;
  };

  validator::Verdict verdict;
  try {
    Trace("validator_contacted");
    Json reply = transport_.Call(Component::kValidator, "validate_and_reserve",
                                 {{"pw_hash", wire::EncodeDigest(record->pw_hash)},
                                  {"sig_ers", wire::EncodeSignature(record->sig_ers)},
                                  {"sig_vs", wire::EncodeSignature(record->sig_vs)}});
    verdict = validator::VerdictFromName(wire::StringField(reply, "verdict"));
  } catch (const Error&) {
    clear_flag();
    throw Error(ErrorCode::kUnavailable, "authentication unavailable");
  }
  if (verdict != validator::Verdict::kApproved) {
    clear_flag();
    return rejected;
  }
  Trace("validator_approved");

  const auto fingerprint = validator::Fingerprint(record->sig_ers);
  SecureBytes token(kTokenSize);
  rng_.Fill(token.span());
  try {
    transport_.Call(Component::kBallotBox, "register_token",
                    {{"token", wire::SealValue(directory_.at(Component::kBallotBox).communication,
                                               token.view())}});
  } catch (const Error&) {
    try {
      transport_.Call(Component::kValidator, "release_use",
                      {{"fingerprint", wire::EncodeDigest(fingerprint)}});
    } catch (const Error&) {
      std::lock_guard lock(mu_);
      pending_validator_.emplace_back("release_use", fingerprint);
    }
    clear_flag();
    throw Error(ErrorCode::kUnavailable, "authentication unavailable");
  }

  AuthOutcome out;
  out.kind = AuthOutcome::Kind::kTokenIssued;
  out.token_signature = crypto::Sign(keyring().Communication(), token.view());
  {
    std::lock_guard lock(mu_);
    Voter& v = voters_.at(voter_id);
    v.authenticating = false;
    v.state = VoterState::kSessionActive;
    v.token = token;
    v.session_expires = clock().Now() + config_.session_expiry;
    v.committing_seq.reset();
  }
  out.token = std::move(token);
  Trace("token_issued");
  return out;
}

crypto::Digest RegistryService::FingerprintOf(const std::string& voter_id) const {
  const auto* record = register_.Find(voter_id);
  if (record == nullptr) throw Error(ErrorCode::kNotFound, "unknown voter");
  return validator::Fingerprint(record->sig_ers);
}

void RegistryService::MarkVotedLocked(const std::string& voter_id, Voter& v) {
  v.state = VoterState::kVoted;
  v.committing_seq.reset();
  v.token.Wipe();
  log_->Append(AsBytes(Json{{"type", "voted"}, {"id", voter_id}}.dump()));
  log_->Flush();
  pending_validator_.emplace_back("commit_use", FingerprintOf(voter_id));
}

void RegistryService::EndSessionLocked(const std::string& voter_id, Voter& v, Notify notify) {
  v.state = VoterState::kEligible;
  v.committing_seq.reset();
  if (notify == Notify::kBallotBox && !v.token.empty()) {
    pending_revocations_.push_back(std::move(v.token));
  }
  v.token.Wipe();
  pending_validator_.emplace_back("release_use", FingerprintOf(voter_id));
}

void RegistryService::FlushNotifications() {
  std::vector<std::pair<std::string, crypto::Digest>> validator_ops;
  std::vector<SecureBytes> revocations;
  {
    std::lock_guard lock(mu_);
    validator_ops.swap(pending_validator_);
    revocations.swap(pending_revocations_);
  }
  std::vector<std::pair<std::string, crypto::Digest>> failed_ops;
  for (auto& [op, fp] : validator_ops) {
    try {
      transport_.Call(Component::kValidator, op, {{"fingerprint", wire::EncodeDigest(fp)}});
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kUnavailable || e.code() == ErrorCode::kTransport) {
        failed_ops.emplace_back(op, fp);
      }
    }
  }
  std::vector<SecureBytes> failed_revocations;
  for (auto& token : revocations) {
    try {
      transport_.Call(Component::kBallotBox, "revoke_token",
                      {{"token", wire::SealValue(directory_.at(Component::kBallotBox).communication,
                                                 token.view())}});
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kUnavailable || e.code() == ErrorCode::kTransport) {
        failed_revocations.push_back(std::move(token));
      }
    }
  }
  if (!failed_ops.empty() || !failed_revocations.empty()) {
    std::lock_guard lock(mu_);
    for (auto& f : failed_ops) pending_validator_.push_back(std::move(f));
    for (auto& t : failed_revocations) pending_revocations_.push_back(std::move(t));
  }
}

void RegistryService::MarkVoted(const std::string& voter_id) {
  {
    std::lock_guard lock(mu_);
    auto it = voters_.find(voter_id);
    if (it == voters_.end()) throw Error(ErrorCode::kNotFound, "unknown voter");
    if (it->second.state != VoterState::kSessionActive) {
      throw Error(ErrorCode::kIllegalState, "voter has no active session");
    }
    MarkVotedLocked(voter_id, it->second);
  }
  FlushNotifications();
}

void RegistryService::ReleaseSession(const std::string& voter_id) {
  {
    std::lock_guard lock(mu_);
    auto it = voters_.find(voter_id);
    if (it == voters_.end()) throw Error(ErrorCode::kNotFound, "unknown voter");
    if (it->second.state != VoterState::kSessionActive) {
      throw Error(ErrorCode::kIllegalState, "voter has no active session");
    }
    EndSessionLocked(voter_id, it->second, Notify::kBallotBox);
  }
  FlushNotifications();
}

void RegistryService::GoOffline() {
  {
    std::lock_guard lock(mu_);
    if (online_) {
      online_ = false;
      logins_.clear();
      std::int64_t released = 0;
      for (auto& [id, v] : voters_) {
        // A session mid-confirm is finished by the ballot box.
        if (v.state == VoterState::kSessionActive && !v.committing_seq) {
          EndSessionLocked(id, v, Notify::kBallotBox);
          ++released;
        }
      }
      audit().Record(AuditCategory::kPollStop,
                     AuditDetail{{"event", "registry_offline"}}.Add("count", released));
    }
  }
  FlushNotifications();
}

Counts RegistryService::counts() const {
  std::lock_guard lock(mu_);
  Counts c;
  for (const auto& [id, v] : voters_) {
    switch (v.state) {
      case VoterState::kEligible: ++c.eligible; break;
      case VoterState::kSessionActive: ++c.session_active; break;
      case VoterState::kVoted: ++c.voted; break;
    }
  }
  return c;
}

VoterState RegistryService::StateOf(const std::string& voter_id) const {
  std::lock_guard lock(mu_);
  auto it = voters_.find(voter_id);
  if (it == voters_.end()) throw Error(ErrorCode::kNotFound, "unknown voter");
  return it->second.state;
}

void RegistryService::Poll() {
  {
    std::lock_guard lock(mu_);
    const Millis now = clock().Now();
    for (auto it = logins_.begin(); it != logins_.end();) {
      it = now >= it->second.expires_at ? logins_.erase(it) : std::next(it);
    }
    for (auto& [id, v] : voters_) {
      if (v.state == VoterState::kSessionActive && !v.committing_seq && now >= v.session_expires) {
        EndSessionLocked(id, v, Notify::kBallotBox);
      }
    }
  }
  FlushNotifications();
}

void RegistryService::ResetElection() {
  {
    std::lock_guard lock(mu_);
    online_ = false;
    logins_.clear();
    for (auto& [id, v] : voters_) {
      v = Voter{};
    }
    pending_validator_.clear();
    pending_revocations_.clear();
    log_->Append(AsBytes(Json{{"type", "reset"}}.dump()));
    log_->Flush();
  }
  keyring().Lock();
  audit().Record(AuditCategory::kPollStop, {{"event", "voter_status_reset"}});
}

RegistryService::Voter* RegistryService::FindByToken(ByteView token, std::string* voter_id) {
  Voter* found = nullptr;
  for (auto& [id, v] : voters_) {
    if (v.state == VoterState::kSessionActive && ConstantTimeEquals(v.token.view(), token)) {
      found = &v;
      *voter_id = id;
    }
  }
  return found;
}

void RegistryService::PrepareCommit(ByteView token, std::int64_t sequence_no) {
  std::lock_guard lock(mu_);
  std::string id;
  Voter* v = FindByToken(token, &id);
  if (v == nullptr) throw Error(ErrorCode::kNotFound, "no session for token");
  v->committing_seq = sequence_no;
}

void RegistryService::FinalizeCommit(ByteView token) {
  {
    std::lock_guard lock(mu_);
    std::string id;
    Voter* v = FindByToken(token, &id);
    if (v == nullptr || !v->committing_seq) {
      throw Error(ErrorCode::kNotFound, "no committing session for token");
    }
    MarkVotedLocked(id, *v);
  }
  FlushNotifications();
}

void RegistryService::AbortCommit(ByteView token) {
  std::lock_guard lock(mu_);
  std::string id;
  Voter* v = FindByToken(token, &id);
  if (v != nullptr) v->committing_seq.reset();
}

void RegistryService::TokenCancelled(ByteView token) {
  {
    std::lock_guard lock(mu_);
    std::string id;
    Voter* v = FindByToken(token, &id);
    if (v == nullptr) throw Error(ErrorCode::kNotFound, "no session for token");
    EndSessionLocked(id, *v, Notify::kNone);
  }
  FlushNotifications();
}

void RegistryService::Recover(std::int64_t stored_count) {
  {
    std::lock_guard lock(mu_);
    for (auto& [id, v] : voters_) {
      if (v.state != VoterState::kSessionActive) continue;
      if (v.committing_seq && *v.committing_seq < stored_count) {
        MarkVotedLocked(id, v);
      } else {
        EndSessionLocked(id, v, Notify::kNone);
      }
    }
  }
  FlushNotifications();
}

void RegistryService::SetTraceSink(std::function<void(std::string_view)> sink) {
  std::lock_guard lock(mu_);
  trace_ = std::move(sink);
}

void RegistryService::Trace(std::string_view event) {
  std::function<void(std::string_view)> sink;
  {
    std::lock_guard lock(mu_);
    sink = trace_;
  }
  if (sink) sink(event);
}

std::string RegistryService::DatabaseImage() const {
  return credentials::SerializeRegister(register_) + ToString(log_->Image());
}

bool RegistryService::StorageIntact() const {
  Bytes image = log_->Image();
  std::size_t valid = 0;
  DurableLog::ParseFrames(image, &valid);
  return valid == image.size();
}

Json RegistryService::HealthDetails() const {
  std::lock_guard lock(mu_);
  return Json{{"online", online_}};
}

Json RegistryService::Handle(Component from, std::string_view type, const Json& body) {
  if (auto common = HandleCommon(from, type, body)) return *common;
  auto token = [&] {
    return wire::OpenValue(keyring().Communication(), wire::Field(body, "token"));
  };
  if (type == "prepare_commit") {
    RequireSender(from, Component::kBallotBox);
    PrepareCommit(token().view(), wire::IntField(body, "seq"));
    return Json::object();
  }
  if (type == "finalize_commit") {
    RequireSender(from, Component::kBallotBox);
    FinalizeCommit(token().view());
    return Json::object();
  }
  if (type == "abort_commit") {
    RequireSender(from, Component::kBallotBox);
    AbortCommit(token().view());
    return Json::object();
  }
  if (type == "token_cancelled") {
    RequireSender(from, Component::kBallotBox);
    TokenCancelled(token().view());
    return Json::object();
  }
  if (type == "recover") {
    RequireSender(from, Component::kBallotBox);
    Recover(wire::IntField(body, "stored_count"));
    return Json::object();
  }
  if (type == "counts") {
    RequireSender(from, Component::kCommittee);
    Counts c = counts();
    return Json{{"eligible", c.eligible}, {"session_active", c.session_active}, {"voted", c.voted}};
  }
  if (type == "electoral_register") {
    RequireSender(from, Component::kCommittee);
    return Json{{"register", credentials::SerializeRegister(register_)}};
  }
  if (type == "go_offline") {
    RequireSender(from, Component::kCommittee);
    GoOffline();
    return Json::object();
  }
  if (type == "reset_election") {
    RequireSender(from, Component::kCommittee);
    ResetElection();
    return Json::object();
  }
  throw Error(ErrorCode::kNotFound, "unknown message type");
}

}  // namespace evote::registry
