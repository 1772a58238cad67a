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

#include "evote/validator/validator_service.h"

#include "evote/common/error.h"
#include "evote/wire/codec.h"

namespace evote::validator {
namespace {

using wire::Json;

UseState UseStateFromName(std::string_view n) {
  if (n == "unused") return UseState::kUnused;
  if (n == "reserved") return UseState::kReserved;
  if (n == "used") return UseState::kUsed;
  throw Error(ErrorCode::kCorrupted, "bad use state in validator log");
}

std::unique_ptr<DurableLog> OpenLog(const std::optional<std::filesystem::path>& path) {
  return path ? std::make_unique<DurableLog>(*path) : std::make_unique<DurableLog>();
}

}  // namespace

std::string_view UseStateName(UseState s) {
  switch (s) {
    case UseState::kUnused: return "unused";
    case UseState::kReserved: return "reserved";
    case UseState::kUsed: return "used";
  }
  return "unknown";
}

std::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kApproved: return "approved";
    case Verdict::kRejected: return "rejected";
    case Verdict::kAlreadyUsed: return "already_used";
  }
  return "unknown";
}

Verdict VerdictFromName(std::string_view name) {
  if (name == "approved") return Verdict::kApproved;
  if (name == "rejected") return Verdict::kRejected;
  if (name == "already_used") return Verdict::kAlreadyUsed;
  throw Error(ErrorCode::kMalformed, "unknown verdict");
}

crypto::Digest Fingerprint(const crypto::Signature& sig_ers) {
  return crypto::HashBytes(sig_ers.bytes);
}

ValidatorService::ValidatorService(crypto::Keyring& keyring, crypto::KeyDirectory directory,
                                   const Clock& clock, ValidatorConfig config,
                                   std::optional<std::filesystem::path> data_dir)
    : ServiceBase(Component::kValidator, keyring, clock, data_dir),
      directory_(std::move(directory)),
      config_(config),
      log_(OpenLog(DataPath("use_records.log"))) {
  Replay();
}

void ValidatorService::Replay() {
  for (const auto& rec : log_->Records()) {
    Json j = Json::parse(ToString(rec));
    if (j.value("type", "") == "reset") {
      records_.clear();
      continue;
    }
    auto fp = wire::DecodeDigest(j.at("fp"));
    auto& r = records_[fp];
    r.fingerprint = fp;
    r.state = UseStateFromName(j.at("to").get<std::string>());
    r.reserved_at = j.at("t").get<Millis>();
  }
}

void ValidatorService::OnKeysUnlocked() {
  std::lock_guard lock(mu_);
  online_ = true;
  audit().Record(AuditCategory::kPollStart, {{"event", "validator_online"}});
}

Verdict ValidatorService::ValidateAndReserve(const crypto::Digest& pw_hash,
                                             const crypto::Signature& sig_ers,
                                             const crypto::Signature& sig_vs) {
  {
    std::lock_guard lock(mu_);
    if (!online_) throw Error(ErrorCode::kUnavailable, "validator offline");
  }
  const auto& ers = directory_.at(Component::kRegistry).communication;
  const auto& vs = directory_.at(Component::kValidator).communication;
  if (!crypto::Verify(ers, pw_hash.view(), sig_ers) ||
      !crypto::Verify(vs, sig_ers.bytes, sig_vs)) {
    return Verdict::kRejected;
  }
  auto fp = Fingerprint(sig_ers);
  std::lock_guard lock(mu_);
  if (!online_) throw Error(ErrorCode::kUnavailable, "validator offline");
  auto& rec = records_[fp];
  rec.fingerprint = fp;
  if (rec.state != UseState::kUnused) return Verdict::kAlreadyUsed;
  Transition(rec, UseState::kReserved, "reserve");
  return Verdict::kApproved;
}

void ValidatorService::CommitUse(const crypto::Digest& fingerprint) {
  std::lock_guard lock(mu_);
  auto it = records_.find(fingerprint);
  if (it == records_.end() || it->second.state != UseState::kReserved) {
    throw Error(ErrorCode::kIllegalState, "signature is not reserved");
  }
  Transition(it->second, UseState::kUsed, "commit");
}

void ValidatorService::ReleaseUse(const crypto::Digest& fingerprint) {
  std::lock_guard lock(mu_);
  auto it = records_.find(fingerprint);
  if (it == records_.end() || it->second.state != UseState::kReserved) {
    throw Error(ErrorCode::kIllegalState, "signature is not reserved");
  }
  Transition(it->second, UseState::kUnused, "release");
}

void ValidatorService::GoOffline() {
  std::lock_guard lock(mu_);
  if (!online_) return;
  online_ = false;
  audit().Record(AuditCategory::kPollStop, {{"event", "validator_offline"}});
}

void ValidatorService::Poll() {
  std::lock_guard lock(mu_);
  const Millis now = clock().Now();
  for (auto& [fp, rec] : records_) {
    if (rec.state == UseState::kReserved && now - rec.reserved_at >= config_.reservation_expiry) {
      Transition(rec, UseState::kUnused, "expire");
    }
  }
}

void ValidatorService::ResetElection() {
  {
    std::lock_guard lock(mu_);
    online_ = false;
    records_.clear();
    Json j{{"type", "reset"}, {"t", clock().Now()}};
    log_->Append(AsBytes(j.dump()));
    log_->Flush();
  }
  keyring().Lock();
  audit().Record(AuditCategory::kPollStop, {{"event", "use_records_reset"}});
}

bool ValidatorService::online() const {
  std::lock_guard lock(mu_);
  return online_;
}

UseState ValidatorService::StateOf(const crypto::Digest& fingerprint) const {
  std::lock_guard lock(mu_);
  auto it = records_.find(fingerprint);
  return it == records_.end() ? UseState::kUnused : it->second.state;
}

std::size_t ValidatorService::UsedCount() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& [fp, rec] : records_) n += rec.state == UseState::kUsed;
  return n;
}

void ValidatorService::Transition(SignatureUseRecord& rec, UseState to, std::string_view reason) {
  const Millis now = clock().Now();
  Json j{{"t", now},
         {"fp", wire::EncodeDigest(rec.fingerprint)},
         {"from", UseStateName(rec.state)},
         {"to", UseStateName(to)},
         {"reason", reason}};
  log_->Append(AsBytes(j.dump()));
  log_->Flush();
  rec.state = to;
  rec.reserved_at = now;
}

std::string ValidatorService::DatabaseImage() const { return ToString(log_->Image()); }

bool ValidatorService::StorageIntact() const {
  std::size_t valid = 0;
  Bytes image = log_->Image();
  DurableLog::ParseFrames(image, &valid);
  return valid == image.size();
}

Json ValidatorService::HealthDetails() const {
  std::lock_guard lock(mu_);
  return Json{{"online", online_}};
}

Json ValidatorService::Handle(Component from, std::string_view type, const Json& body) {
  if (auto common = HandleCommon(from, type, body)) return *common;
  if (type == "validate_and_reserve") {
    RequireSender(from, Component::kRegistry);
    Verdict v = ValidateAndReserve(wire::DecodeDigest(wire::Field(body, "pw_hash")),
                                   wire::DecodeSignature(wire::Field(body, "sig_ers")),
                                   wire::DecodeSignature(wire::Field(body, "sig_vs")));
    return Json{{"verdict", VerdictName(v)}};
  }
  if (type == "commit_use") {
    RequireSender(from, Component::kRegistry);
    CommitUse(wire::DecodeDigest(wire::Field(body, "fingerprint")));
    return Json::object();
  }
  if (type == "release_use") {
    RequireSender(from, Component::kRegistry);
    ReleaseUse(wire::DecodeDigest(wire::Field(body, "fingerprint")));
    return Json::object();
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

}  // namespace evote::validator
