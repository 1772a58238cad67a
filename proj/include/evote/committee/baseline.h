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

#ifndef EVOTE_COMMITTEE_BASELINE_H_
#define EVOTE_COMMITTEE_BASELINE_H_

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "evote/common/clock.h"
#include "evote/crypto/digest.h"
#include "evote/crypto/keys.h"

namespace evote::committee {

struct ArtifactDigest {
  std::string path;
  crypto::Digest digest;
};

// Signed digests of each component's deployable artifact.
struct SoftwareBaseline {
  std::map<std::string, ArtifactDigest> artifacts;
  Millis recorded_at = 0;
  crypto::Signature signature;

  Bytes SignedBytes() const;
  nlohmann::json ToJson() const;
  static SoftwareBaseline FromJson(const nlohmann::json& j);
};

// Throws kNotFound for a missing artifact.
SoftwareBaseline RecordBaseline(const std::map<std::string, std::filesystem::path>& artifacts,
                                Millis now, const crypto::PrivateKey& signer);

struct BaselineReport {
  bool signature_ok = false;
  std::map<std::string, std::string> status;  // ok | mismatch | missing

  bool ok() const;
  std::vector<std::string> Mismatches() const;
  nlohmann::json ToJson() const;
};

// Re-hashes every artifact at its recorded path.
BaselineReport VerifyBaseline(const SoftwareBaseline& baseline, const crypto::PublicKey& signer);

}  // namespace evote::committee

#endif  // EVOTE_COMMITTEE_BASELINE_H_
