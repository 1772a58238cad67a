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

#include "evote/wire/service_base.h"


#include "evote/common/error.h"
#include "evote/wire/codec.h"

namespace evote::wire {
namespace {

AuditLog MakeAudit(Component self, const Clock& clock,
                   const std::optional<std::filesystem::path>& dir) {
  if (dir) {
    std::filesystem::create_directories(*dir);
    return AuditLog(self, clock, *dir / "audit.log");
  }
  return AuditLog(self, clock);
}

}  // namespace

bool IsBootstrapMessage(std::string_view type) {
  return type == "unlock" || type == "health" || type == "audit_log" ||
         type == "database_image" || type == "counts" || type == "reset_election" ||
         type == "clear_votes";
}

ServiceBase::ServiceBase(Component self, crypto::Keyring& keyring, const Clock& clock,
                         std::optional<std::filesystem::path> data_dir)
    : self_(self),
      keyring_(keyring),
      clock_(clock),
      data_dir_(std::move(data_dir)),
      audit_(MakeAudit(self, clock, data_dir_)) {}

void ServiceBase::UnlockSlot(crypto::KeyPurpose which, std::string_view passphrase) {
  keyring_.Unlock(which, passphrase);
  if (!keyring_.FullyUnlocked()) return;
  try {
    OnKeysUnlocked();
  } catch (...) {
    keyring_.Lock();
    throw;
  }
}

void ServiceBase::RequireSender(Component from, Component expected) {
  if (from != expected) {
    throw Error(ErrorCode::kPermissionDenied, "sender not allowed for this message");
  }
}

std::optional<std::filesystem::path> ServiceBase::DataPath(std::string_view file) const {
  if (!data_dir_) return std::nullopt;
  return *data_dir_ / std::string(file);
}

std::optional<Json> ServiceBase::HandleCommon(Component from, std::string_view type,
                                              const Json& body) {
  if (type == "health") {
    Json out = HealthDetails();
    out["component"] = std::string(ComponentName(self_));
    out["status"] = "up";
    out["time"] = clock_.Now();
    out["keys_unlocked"] = keyring_.FullyUnlocked();
    out["storage_ok"] = StorageIntact();
    return out;
  }
  if (type == "unlock") {
    RequireSender(from, Component::kCommittee);
    auto which = crypto::KeyPurposeFromName(StringField(body, "slot"));
    SecureBytes pp = OpenValue(keyring_.Https(), Field(body, "passphrase"));
    UnlockSlot(which, std::string_view(reinterpret_cast<const char*>(pp.view().data()), pp.view().size()));
    return Json{{"unlocked", true}, {"online", keyring_.FullyUnlocked()}};
  }
  if (type == "audit_log") {
    RequireSender(from, Component::kCommittee);
    return Json{{"log", audit_.Serialize()}};
  }
  if (type == "database_image") {
    RequireSender(from, Component::kCommittee);
    return Json{{"image", EncodeBytes(AsBytes(DatabaseImage()))}};
  }
  return std::nullopt;
}

}  // namespace evote::wire
