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

#include "key_store.h"

#include "evote/common/error.h"
#include "evote/crypto/key_protection.h"
#include "files.h"

namespace evote::cli {
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kStep = "keygen";

fs::path PubPath(const fs::path& dir, crypto::KeyPurpose p) {
  return dir / (std::string(crypto::KeyPurposeName(p)) + ".pub");
}

std::string Text(const Bytes& b) { return ToString(b); }

}  // namespace

fs::path KeyStore::DirOf(Component c) const { return root_ / std::string(ComponentName(c)); }

void KeyStore::Write(Component c, const crypto::ProtectedComponentKeys& keys) {
  const fs::path dir = DirOf(c);
  fs::remove(MarkerPath(dir));
  fs::create_directories(dir);
  WriteFileAtomic(dir / "https.key", Text(crypto::SerializePlainKeyFile(keys.https)));
  WriteFileAtomic(dir / "communication.key", Text(crypto::SerializeKeyFile(keys.communication)));
  WriteFileAtomic(dir / "database.key", Text(crypto::SerializeKeyFile(keys.database)));
  for (auto p : {crypto::KeyPurpose::kHttps, crypto::KeyPurpose::kCommunication,
                 crypto::KeyPurpose::kDatabase}) {
    WriteFileAtomic(PubPath(dir, p), Text(crypto::SerializePublicKeyFile(keys.publics.Get(p))));
  }
  MarkComplete(dir, kStep);
}

crypto::ProtectedComponentKeys KeyStore::Load(Component c) const {
  const fs::path dir = DirOf(c);
  RequireComplete(dir, kStep);
  return {crypto::ParsePlainKeyFile(AsBytes(ReadFile(dir / "https.key"))),
          crypto::ParseKeyFile(AsBytes(ReadFile(dir / "communication.key"))),
          crypto::ParseKeyFile(AsBytes(ReadFile(dir / "database.key"))), Publics(c)};
}

crypto::ComponentPublicKeys KeyStore::Publics(Component c) const {
  const fs::path dir = DirOf(c);
  RequireComplete(dir, kStep);
  auto read = [&](crypto::KeyPurpose p) {
    crypto::PublicKey k = crypto::ParsePublicKeyFile(AsBytes(ReadFile(PubPath(dir, p))));
    if (k.purpose() != p) throw Error(ErrorCode::kMalformed, "public key file has the wrong purpose");
    return k;
  };
  return {read(crypto::KeyPurpose::kHttps), read(crypto::KeyPurpose::kCommunication),
          read(crypto::KeyPurpose::kDatabase)};
}

crypto::KeyDirectory KeyStore::Directory() const {
  crypto::KeyDirectory d;
  for (Component c : kAllComponents) d[c] = Publics(c);
  return d;
}

crypto::PrivateKey KeyStore::Unlock(Component c, crypto::KeyPurpose which,
                                    std::string_view passphrase) const {
  auto keys = Load(c);
  if (which == crypto::KeyPurpose::kHttps) return keys.https;
  return crypto::UnlockPrivateKey(
      which == crypto::KeyPurpose::kCommunication ? keys.communication : keys.database, passphrase);
}

}  // namespace evote::cli
