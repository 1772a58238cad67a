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

#ifndef EVOTE_CRYPTO_KEYRING_H_
#define EVOTE_CRYPTO_KEYRING_H_

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "evote/common/component.h"
#include "evote/crypto/key_protection.h"
#include "evote/crypto/keys.h"

namespace evote::crypto {

struct ComponentPublicKeys {
  PublicKey https;
  PublicKey communication;
  PublicKey database;

  const PublicKey& Get(KeyPurpose p) const;
};

// Public keys of every component, shared with all of them at installation.
using KeyDirectory = std::map<Component, ComponentPublicKeys>;

// What a component keeps on disk: the https key in the clear, the
// communication and database keys passphrase-protected.
struct ProtectedComponentKeys {
  PrivateKey https;
  EncryptedPrivateKey communication;
  EncryptedPrivateKey database;
  ComponentPublicKeys publics;
};

struct ComponentPassphrases {
  std::string communication;
  std::string database;
};

// Generates the three key pairs of one component and protects the two
// private keys that must be passphrase-protected.
ProtectedComponentKeys GenerateComponentKeys(
    Component component, const ComponentPassphrases& passphrases,
    std::optional<std::uint64_t> seed = std::nullopt,
    KdfParams kdf = KdfParams::Interactive());

// Runtime key holder for one component. Locked until both passphrases have
// been entered.
class Keyring {
 public:
  explicit Keyring(ProtectedComponentKeys keys);

  // Throws kWrongPassphrase and leaves the slot locked on failure.
  void Unlock(KeyPurpose which, std::string_view passphrase);
  bool IsUnlocked(KeyPurpose which) const;
  bool FullyUnlocked() const;
  // Erases the unlocked private keys.
  void Lock();

  // Throw kIllegalState when locked.
  PrivateKey Communication() const;
  PrivateKey Database() const;
  PrivateKey Https() const;

  const ComponentPublicKeys& publics() const { return keys_.publics; }

 private:
  ProtectedComponentKeys keys_;
  mutable std::mutex mu_;
  std::optional<PrivateKey> communication_;
  std::optional<PrivateKey> database_;
};

}  // namespace evote::crypto

#endif  // EVOTE_CRYPTO_KEYRING_H_
