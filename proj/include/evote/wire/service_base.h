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

#ifndef EVOTE_WIRE_SERVICE_BASE_H_
#define EVOTE_WIRE_SERVICE_BASE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "evote/common/audit.h"
#include "evote/common/clock.h"
#include "evote/common/component.h"
#include "evote/crypto/keyring.h"
#include "evote/wire/transport.h"

namespace evote::wire {

// Shared component plumbing: key unlocking by passphrase, health, audit
// export and database images. Subclasses add their own message types.
class ServiceBase : public MessageHandler {
 public:
  ServiceBase(Component self, crypto::Keyring& keyring, const Clock& clock,
              std::optional<std::filesystem::path> data_dir);

  Component self() const { return self_; }
  crypto::Keyring& keyring() { return keyring_; }
  const crypto::Keyring& keyring() const { return keyring_; }
  AuditLog& audit() { return audit_; }
  const AuditLog& audit() const { return audit_; }
  const Clock& clock() const { return clock_; }

  // Unlocks one key slot. When the second slot opens, OnKeysUnlocked runs;
  // if it throws, both keys are locked again.
  void UnlockSlot(crypto::KeyPurpose which, std::string_view passphrase);

  // Snapshot of every durable store of this component.
  virtual std::string DatabaseImage() const = 0;
  virtual bool StorageIntact() const { return true; }

 protected:
  virtual void OnKeysUnlocked() = 0;
  virtual Json HealthDetails() const { return Json::object(); }

  // Handles unlock/health/audit_log/database_image from the committee.
  std::optional<Json> HandleCommon(Component from, std::string_view type, const Json& body);
  static void RequireSender(Component from, Component expected);
  std::optional<std::filesystem::path> DataPath(std::string_view file) const;

 private:
  Component self_;
  crypto::Keyring& keyring_;
  const Clock& clock_;
  std::optional<std::filesystem::path> data_dir_;
  AuditLog audit_;
};

}  // namespace evote::wire

#endif  // EVOTE_WIRE_SERVICE_BASE_H_
