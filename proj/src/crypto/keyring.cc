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

#include "evote/crypto/keyring.h"

#include "evote/common/error.h"

namespace evote::crypto {

const PublicKey& ComponentPublicKeys::Get(KeyPurpose p) const {
  switch (p) {
    case KeyPurpose::kHttps: return https;
    case KeyPurpose::kCommunication: return communication;
    case KeyPurpose::kDatabase: return database;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown purpose");
}

ProtectedComponentKeys GenerateComponentKeys(Component component,
                                             const ComponentPassphrases& passphrases,
                                             std::optional<std::uint64_t> seed,
                                             KdfParams kdf) {
  auto make = [&](KeyPurpose purpose) {
    if (!seed) return GenerateKeyPair(purpose);
    std::string material = std::string(ComponentName(component)) + "/" +
                           std::to_string(*seed);
    return GenerateKeyPairFromSeed(purpose, AsBytes(material));
  };
  KeyPair https = make(KeyPurpose::kHttps);
  KeyPair comm = make(KeyPurpose::kCommunication);
  KeyPair db = make(KeyPurpose::kDatabase);
  return ProtectedComponentKeys{
      std::move(https.private_key),
      ProtectPrivateKey(comm.private_key, passphrases.communication, kdf),
      ProtectPrivateKey(db.private_key, passphrases.database, kdf),
      ComponentPublicKeys{https.public_key, comm.public_key, db.public_key}};
}

Keyring::Keyring(ProtectedComponentKeys keys) : keys_(std::move(keys)) {}

void Keyring::Unlock(KeyPurpose which, std::string_view passphrase) {
  const EncryptedPrivateKey* epk = nullptr;
  if (which == KeyPurpose::kCommunication) epk = &keys_.communication;
  if (which == KeyPurpose::kDatabase) epk = &keys_.database;
  if (epk == nullptr) throw Error(ErrorCode::kInvalidArgument, "https key is not protected");
  if (passphrase.empty()) throw Error(ErrorCode::kWrongPassphrase, "wrong passphrase");
  PrivateKey key = UnlockPrivateKey(*epk, passphrase);
  if (!(key.Public() == keys_.publics.Get(which))) {
    throw Error(ErrorCode::kWrongPassphrase, "unlocked key does not match its public key");
  }
  std::lock_guard lock(mu_);
  if (which == KeyPurpose::kCommunication) {
    communication_.emplace(std::move(key));
  } else {
    database_.emplace(std::move(key));
  }
}

bool Keyring::IsUnlocked(KeyPurpose which) const {
  std::lock_guard lock(mu_);
  if (which == KeyPurpose::kCommunication) return communication_.has_value();
  if (which == KeyPurpose::kDatabase) return database_.has_value();
  return true;
}

bool Keyring::FullyUnlocked() const {
  std::lock_guard lock(mu_);
  return communication_.has_value() && database_.has_value();
}

void Keyring::Lock() {
  std::lock_guard lock(mu_);
  communication_.reset();
  database_.reset();
}

PrivateKey Keyring::Communication() const {
  std::lock_guard lock(mu_);
  if (!communication_) throw Error(ErrorCode::kIllegalState, "communication key locked");
  return *communication_;
}

PrivateKey Keyring::Database() const {
  std::lock_guard lock(mu_);
  if (!database_) throw Error(ErrorCode::kIllegalState, "database key locked");
  return *database_;
}

PrivateKey Keyring::Https() const { return keys_.https; }

}  // namespace evote::crypto
