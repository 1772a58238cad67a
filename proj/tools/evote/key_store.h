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

#ifndef EVOTE_TOOLS_KEY_STORE_H_
#define EVOTE_TOOLS_KEY_STORE_H_

#include <filesystem>

#include "evote/common/component.h"
#include "evote/crypto/keyring.h"

namespace evote::cli {

// On-disk key layout, one directory per component:
//   <root>/<name>/https.key          plain private key (EVSK)
//   <root>/<name>/communication.key  protected private key (EVKF)
//   <root>/<name>/database.key       protected private key (EVKF)
//   <root>/<name>/<purpose>.pub      public keys (EVPK)
// followed by the completion marker <root>/<name>.done.
class KeyStore {
 public:
  explicit KeyStore(std::filesystem::path root) : root_(std::move(root)) {}

  std::filesystem::path DirOf(Component c) const;
  void Write(Component c, const crypto::ProtectedComponentKeys& keys);
  crypto::ProtectedComponentKeys Load(Component c) const;
  crypto::ComponentPublicKeys Publics(Component c) const;
  // Public keys of all four components.
  crypto::KeyDirectory Directory() const;
  crypto::PrivateKey Unlock(Component c, crypto::KeyPurpose which,
                            std::string_view passphrase) const;

 private:
  std::filesystem::path root_;
};

}  // namespace evote::cli

#endif  // EVOTE_TOOLS_KEY_STORE_H_
