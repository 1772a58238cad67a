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

#include "evote/ballotbox/ballotbox_service.h"

#include "evote/common/error.h"
#include "evote/wire/codec.h"
#include "evote/wire/faults.h"

namespace evote::ballotbox {
namespace {

using wire::Json;

std::unique_ptr<DurableLog> OpenLog(const std::optional<std::filesystem::path>& path) {
  return path ? std::make_unique<DurableLog>(*path) : std::make_unique<DurableLog>();
}

}  // namespace

BallotBoxService::BallotBoxService(crypto::Keyring& keyring, crypto::KeyDirectory directory,
                                   Ballot ballot, const Clock& clock, wire::Transport& transport,
                                   BallotBoxConfig config,
                                   std::optional<std::filesystem::path> data_dir)
    : ServiceBase(Component::kBallotBox, keyring, clock, data_dir),
      directory_(std::move(directory)),
      ballot_(std::move(ballot)),
      transport_(transport),
      config_(config),
      attestations_(directory_.at(Component::kCommittee).communication, clock),
      log_(OpenLog(DataPath("votes.log"))) {
  ballot_.Check();
  if (config_.block_size == 0) throw Error(ErrorCode::kInvalidArgument, "block size must be > 0");
  chain_ = VoteChain::FromRecords(log_->Records());
  pending_recover_ = data_dir.has_value();
}

BallotBoxService::~BallotBoxService() = default;

BallotBoxService::LiveToken* BallotBoxService::FindLocked(ByteView token) {
  LiveToken* found = nullptr;
  for (auto& t : tokens_) {
    if (ConstantTimeEquals(t.value.view(), token)) found = &t;
  }
  return found;
}

BallotBoxService::LiveToken& BallotBoxService::RequireLive(const VoterToken& token) {
  if (!crypto::Verify(directory_.at(Component::kRegistry).communication, token.value.view(),
                      token.signature)) {
    throw Error(ErrorCode::kNotFound, "unknown token");
  }
  LiveToken* t = FindLocked(token.value.view());
  if (t == nullptr) throw Error(ErrorCode::kNotFound, "unknown token");
  return *t;
}

void BallotBoxService::EraseLocked(ByteView token) {
  for (auto it = tokens_.begin(); it != tokens_.end(); ++it) {
    if (ConstantTimeEquals(it->value.view(), token)) {
      it->value.Wipe();
      tokens_.erase(it);
      return;
    }
  }
}

void BallotBoxService::RegisterToken(ByteView token) {
  std::lock_guard lock(mu_);
  if (!accepting_) throw Error(ErrorCode::kIllegalState, "ballot box not accepting voters");
  if (token.size() != 32) throw Error(ErrorCode::kInvalidArgument, "bad token length");
  if (FindLocked(token) != nullptr) throw Error(ErrorCode::kAlreadyExists, "duplicate token");
  LiveToken t;
  t.value = SecureBytes(token);
  t.issued_at = clock().Now();
  tokens_.push_back(std::move(t));
}

void BallotBoxService::RevokeToken(ByteView token) {
  std::lock_guard lock(mu_);
  EraseLocked(token);
}

const Ballot& BallotBoxService::FetchBallot(const VoterToken& token) {
  std::lock_guard lock(mu_);
  RequireLive(token);
  return ballot_;
}

std::string BallotBoxService::SubmitVote(const VoterToken& token, const VoteContent& vote) {
  std::string canonical = Normalize(ballot_, vote).Canonical();
  std::lock_guard lock(mu_);
  LiveToken& t = RequireLive(token);
  if (t.confirming) throw Error(ErrorCode::kBusy, "vote is being cast");
  t.pending = canonical;
  t.echo_sent_at = clock().Now();
  return canonical;
}

bool BallotBoxService::Step(int step) {
  StepHook hook;
  {
    std::lock_guard lock(mu_);
    hook = step_hook_;
  }
  return hook && hook("confirm_vote", step);
}

CastReceipt BallotBoxService::ConfirmVote(const VoterToken& token) {
  std::string canonical;
  {
    std::lock_guard lock(mu_);
    LiveToken& t = RequireLive(token);
    if (!t.pending) throw Error(ErrorCode::kIllegalState, "no pending vote to confirm");
    if (t.confirming) throw Error(ErrorCode::kBusy, "vote is being cast");
    t.confirming = true;
    canonical = *t.pending;
  }
  const ByteView value = token.value.view();
  auto unmark = [&] {
    std::lock_guard lock(mu_);
    if (LiveToken* t = FindLocked(value)) t->confirming = false;
  };
  auto crash_if = [&](int step) {
    if (Step(step)) throw wire::CrashSignal(std::string(kConfirmSteps[step]));
  };
  const crypto::PublicKey& ers = directory_.at(Component::kRegistry).communication;

  std::unique_lock append(append_mu_);
  const auto seq = static_cast<std::int64_t>(chain_.votes.size());
  crash_if(0);
  StoredVote vote;
  vote.sequence_no = seq;
  vote.envelope = crypto::Seal(keyring().publics().database, AsBytes(canonical));
  crash_if(1);
  vote.vote_signature = crypto::Sign(keyring().Communication(), vote.envelope.Serialize());
  crash_if(2);
  try {
    transport_.Call(Component::kRegistry, "prepare_commit",
                    {{"token", wire::SealValue(ers, value)}, {"seq", seq}});
  } catch (const Error& e) {
    append.unlock();
    unmark();
    if (e.code() == ErrorCode::kNotFound) throw Error(ErrorCode::kNotFound, "unknown token");
    throw Error(ErrorCode::kUnavailable, "vote not stored");
  }
  crash_if(3);
  log_->Append(VoteChain::EncodeVote(vote));
  if (Step(4)) {
    log_->TearPending(log_->pending_bytes() / 2);
    throw wire::CrashSignal(std::string(kConfirmSteps[4]));
  }
  crash_if(5);
  try {
    log_->Flush();
  } catch (const Error&) {
    log_->DropPending();
    append.unlock();
    try {
      transport_.Call(Component::kRegistry, "abort_commit", {{"token", wire::SealValue(ers, value)}});
    } catch (const Error&) {
    }
    unmark();
    audit().Record(AuditCategory::kMalfunction, {{"event", "vote_store_write_failed"}});
    throw Error(ErrorCode::kIo, "vote not stored");
  }
  // Committed.
  chain_.votes.push_back(std::move(vote));
  crash_if(6);
  SealFullBlocksLocked();
  append.unlock();

  crash_if(7);
  try {
    transport_.Call(Component::kRegistry, "finalize_commit", {{"token", wire::SealValue(ers, value)}});
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kUnavailable || e.code() == ErrorCode::kTransport) {
      std::lock_guard lock(mu_);
      pending_finalize_.emplace_back(value);
    }
  }
  crash_if(8);
  {
    std::lock_guard lock(mu_);
    EraseLocked(value);
  }
  crash_if(9);
  return CastReceipt{true};
}

void BallotBoxService::Cancel(const VoterToken& token) {
  {
    std::lock_guard lock(mu_);
    LiveToken& t = RequireLive(token);
    if (t.confirming) throw Error(ErrorCode::kBusy, "vote is being cast");
    EraseLocked(token.value.view());
  }
  NotifyRegistry("token_cancelled", token.value.view());
}

void BallotBoxService::NotifyRegistry(std::string_view type, ByteView token) {
  try {
    transport_.Call(Component::kRegistry, type,
                    {{"token", wire::SealValue(directory_.at(Component::kRegistry).communication,
                                               token)}});
  } catch (const Error&) {
    // The registry session then ends by expiry.
  }
}

std::int64_t BallotBoxService::StoredCount() const {
  std::lock_guard lock(append_mu_);
  return static_cast<std::int64_t>(chain_.votes.size());
}

bool BallotBoxService::accepting() const {
  std::lock_guard lock(mu_);
  return accepting_;
}

std::size_t BallotBoxService::live_tokens() const {
  std::lock_guard lock(mu_);
  return tokens_.size();
}

void BallotBoxService::SealFullBlocksLocked() {
  const auto B = static_cast<std::int64_t>(config_.block_size);
  while (static_cast<std::int64_t>(chain_.votes.size()) - chain_.SealedVotes() >= B) {
    VoteBlock b = SealBlock(chain_, chain_.SealedVotes(), B, keyring().Communication());
    log_->Append(VoteChain::EncodeBlock(b));
    log_->Flush();
    chain_.blocks.push_back(std::move(b));
  }
}

void BallotBoxService::SealRemainderLocked() {
  SealFullBlocksLocked();
  const std::int64_t rest = static_cast<std::int64_t>(chain_.votes.size()) - chain_.SealedVotes();
  if (rest == 0) return;
  VoteBlock b = SealBlock(chain_, chain_.SealedVotes(), rest, keyring().Communication());
  log_->Append(VoteChain::EncodeBlock(b));
  log_->Flush();
  chain_.blocks.push_back(std::move(b));
}

void BallotBoxService::Stop(const wire::StateAttestation& attestation) {
  attestations_.Verify(attestation, "Stopped", "stop");
  {
    std::lock_guard lock(mu_);
    accepting_ = false;
    stopped_ = true;
    for (auto& t : tokens_) t.value.Wipe();
    tokens_.clear();
  }
  std::int64_t votes = 0;
  std::int64_t blocks = 0;
  {
    std::lock_guard lock(append_mu_);
    SealRemainderLocked();
    votes = static_cast<std::int64_t>(chain_.votes.size());
    blocks = static_cast<std::int64_t>(chain_.blocks.size());
  }
  audit().Record(AuditCategory::kPollStop,
                 AuditDetail{{"event", "ballot_box_closed"}}.Add("votes", votes).Add("blocks", blocks));
}

TallyResult BallotBoxService::Tally(const wire::StateAttestation& attestation) {
  attestations_.Verify(attestation, "Stopped", "tally");
  {
    std::lock_guard lock(mu_);
    if (!stopped_) throw Error(ErrorCode::kIllegalState, "intermediate results are forbidden");
  }
  audit().Record(AuditCategory::kTallyStartAndResult, {{"event", "tally_started"}});
  std::lock_guard lock(append_mu_);
  ChainReport report = ballotbox::VerifyChain(chain_, keyring().publics().communication,
                                              config_.block_size, true);
  if (!report.ok()) {
    audit().Record(AuditCategory::kMalfunction,
                   AuditDetail{{"event", "vote_chain_tampered"}}.Add(
                       "count", static_cast<std::int64_t>(report.issues.size())));
    throw Error(ErrorCode::kVerificationFailed, "vote chain verification failed: " + report.issues.front());
  }
  TallyResult result = EmptyTally(ballot_);
  const crypto::PrivateKey db = keyring().Database();
  for (const auto& v : chain_.votes) {
    SecureBytes plain(crypto::Open(db, v.envelope));
    CountVote(result, Normalize(ballot_, VoteContent::ParseCanonical(ToString(plain.view()))));
  }
  result.signature = crypto::Sign(keyring().Communication(), AsBytes(result.CanonicalBytes()));
  audit().Record(AuditCategory::kTallyStartAndResult,
                 AuditDetail{{"event", "tally_completed"}}.Add("total", result.total_votes));
  return result;
}

void BallotBoxService::ClearVotes(const wire::StateAttestation& attestation) {
  attestations_.Verify(attestation, "Stopped", "clear");
  {
    std::lock_guard lock(mu_);
    if (!stopped_) throw Error(ErrorCode::kIllegalState, "votes can only be cleared when stopped");
    stopped_ = false;
    accepting_ = false;
    for (auto& t : tokens_) t.value.Wipe();
    tokens_.clear();
    pending_finalize_.clear();
  }
  std::int64_t destroyed = 0;
  {
    std::lock_guard lock(append_mu_);
    destroyed = static_cast<std::int64_t>(chain_.votes.size());
    log_->Clear();
    chain_ = VoteChain{};
  }
  audit().Record(AuditCategory::kPollStop,
                 AuditDetail{{"event", "votes_cleared"}}.Add("votes", destroyed));
  keyring().Lock();
}

ChainReport BallotBoxService::VerifyChain() const {
  std::lock_guard lock(append_mu_);
  bool stopped;
  {
    std::lock_guard l(mu_);
    stopped = stopped_;
  }
  return ballotbox::VerifyChain(chain_, keyring().publics().communication, config_.block_size,
                                stopped);
}

VoteChain BallotBoxService::chain() const {
  std::lock_guard lock(append_mu_);
  return chain_;
}

void BallotBoxService::Restart() {
  {
    std::lock_guard lock(mu_);
    for (auto& t : tokens_) t.value.Wipe();
    tokens_.clear();
    pending_finalize_.clear();
    pending_recover_ = true;
  }
  bool stopped;
  {
    std::lock_guard lock(mu_);
    stopped = stopped_;
  }
  {
    std::lock_guard lock(append_mu_);
    log_->DropPending();
    log_->Recover();
    chain_ = VoteChain::FromRecords(log_->Records());
    if (keyring().IsUnlocked(crypto::KeyPurpose::kCommunication)) {
      if (stopped) {
        SealRemainderLocked();
      } else {
        SealFullBlocksLocked();
      }
    }
  }
  RecoverAfterRestart();
}

void BallotBoxService::RecoverAfterRestart() {
  try {
    transport_.Call(Component::kRegistry, "recover", {{"stored_count", StoredCount()}});
    std::lock_guard lock(mu_);
    pending_recover_ = false;
  } catch (const Error&) {
  }
}

void BallotBoxService::Poll() {
  bool recover;
  std::vector<SecureBytes> finalize;
  {
    std::lock_guard lock(mu_);
    recover = pending_recover_;
    finalize.swap(pending_finalize_);
  }
  if (recover) RecoverAfterRestart();
  const crypto::PublicKey& ers = directory_.at(Component::kRegistry).communication;
  for (auto& token : finalize) {
    try {
      transport_.Call(Component::kRegistry, "finalize_commit",
                      {{"token", wire::SealValue(ers, token.view())}});
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kUnavailable || e.code() == ErrorCode::kTransport) {
        std::lock_guard lock(mu_);
        pending_finalize_.push_back(std::move(token));
      }
    }
  }
}

void BallotBoxService::SetStepHook(StepHook hook) {
  std::lock_guard lock(mu_);
  step_hook_ = std::move(hook);
}

void BallotBoxService::OnKeysUnlocked() {
  std::int64_t votes;
  {
    std::lock_guard lock(append_mu_);
    SealFullBlocksLocked();
    votes = static_cast<std::int64_t>(chain_.votes.size());
  }
  bool recover;
  {
    std::lock_guard lock(mu_);
    accepting_ = !stopped_;
    recover = pending_recover_;
  }
  audit().Record(AuditCategory::kPollStart,
                 AuditDetail{{"event", "ballot_box_online"}}.Add("votes", votes));
  if (recover) RecoverAfterRestart();
}

Json BallotBoxService::HealthDetails() const {
  std::lock_guard lock(mu_);
  return Json{{"accepting", accepting_}, {"stopped", stopped_}};
}

std::string BallotBoxService::DatabaseImage() const { return ToString(log_->Image()); }

bool BallotBoxService::StorageIntact() const {
  Bytes image = log_->Image();
  std::size_t valid = 0;
  try {
    auto frames = DurableLog::ParseFrames(image, &valid);
    VoteChain::FromRecords(frames);
  } catch (const Error&) {
    return false;
  }
  return valid == image.size();
}

Json BallotBoxService::Handle(Component from, std::string_view type, const Json& body) {
  if (auto common = HandleCommon(from, type, body)) return *common;
  if (type == "register_token" || type == "revoke_token") {
    RequireSender(from, Component::kRegistry);
    SecureBytes token = wire::OpenValue(keyring().Communication(), wire::Field(body, "token"));
    if (type == "register_token") {
      RegisterToken(token.view());
    } else {
      RevokeToken(token.view());
    }
    return Json::object();
  }
  if (type == "counts") {
    RequireSender(from, Component::kCommittee);
    return Json{{"stored", StoredCount()}};
  }
  if (type == "verify_chain") {
    RequireSender(from, Component::kCommittee);
    return VerifyChain().ToJson();
  }
  if (type == "stop" || type == "tally" || type == "clear_votes") {
    RequireSender(from, Component::kCommittee);
    auto att = wire::StateAttestation::FromJson(wire::Field(body, "attestation"));
    if (type == "stop") {
      Stop(att);
      return Json{{"stored", StoredCount()}};
    }
    if (type == "tally") return Tally(att).ToJson();
    ClearVotes(att);
    return Json::object();
  }
  throw Error(ErrorCode::kNotFound, "unknown message type");
}

}  // namespace evote::ballotbox
