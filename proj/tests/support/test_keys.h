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

#ifndef EVOTE_TESTS_SUPPORT_TEST_KEYS_H_
#define EVOTE_TESTS_SUPPORT_TEST_KEYS_H_

#include <map>
#include <memory>
#include <string>

#include "evote/common/component.h"
#include "evote/crypto/keyring.h"

namespace evote::testing {

inline crypto::ComponentPassphrases TestPassphrases(Component c) {
  const std::string name(ComponentName(c));
  return {"comm-pass-" + name, "db-pass-" + name};
}

// Seeded keys for all four components with the fast KDF.
struct TestKeys {
  explicit TestKeys(std::uint64_t seed = 7) {
    for (Component c : kAllComponents) {
      auto keys = crypto::GenerateComponentKeys(c, TestPassphrases(c), seed,
                                                crypto::KdfParams::Fast());
      directory[c] = keys.publics;
      stored.emplace(c, keys);
      keyrings[c] = std::make_unique<crypto::Keyring>(keys);
    }
  }

  crypto::Keyring& ring(Component c) { return *keyrings.at(c); }

  void Unlock(Component c) {
    auto pp = TestPassphrases(c);
    ring(c).Unlock(crypto::KeyPurpose::kCommunication, pp.communication);
    ring(c).Unlock(crypto::KeyPurpose::kDatabase, pp.database);
  }

  // Fresh comm key of a component, unlocked from the stored form.
  crypto::PrivateKey Communication(Component c) {
    return crypto::UnlockPrivateKey(stored.at(c).communication,
                                    TestPassphrases(c).communication);
  }

  crypto::KeyDirectory directory;
  std::map<Component, crypto::ProtectedComponentKeys> stored;
  std::map<Component, std::unique_ptr<crypto::Keyring>> keyrings;
};

}  // namespace evote::testing

#endif  // EVOTE_TESTS_SUPPORT_TEST_KEYS_H_
