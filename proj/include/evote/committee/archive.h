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

#ifndef EVOTE_COMMITTEE_ARCHIVE_H_
#define EVOTE_COMMITTEE_ARCHIVE_H_

#include <optional>
#include <string>
#include <vector>

#include "evote/common/bytes.h"
#include "evote/crypto/keys.h"

namespace evote::committee {

inline constexpr std::string_view kManifestMember = "manifest.json";
inline constexpr std::string_view kSignatureMember = "signature";

struct ArchiveMember {
  std::string name;
  Bytes data;
};

// Container: magic "EVAR", u32 member count, then per member a
// length-prefixed name and length-prefixed data. The last member is
// "manifest.json" listing the SHA-256 of every other member. The trailing
// signature record holds two Ed25519 signatures: one over every byte before
// it, then one over the manifest text alone.
Bytes BuildArchive(const std::vector<ArchiveMember>& members, const crypto::PrivateKey& signer);

struct ArchiveReport {
  bool ok = false;
  // Name of the first member that fails its digest, "manifest.json" or
  // "signature"; empty when ok or the container does not parse.
  std::string broken_member;
  std::vector<std::string> issues;
  std::vector<ArchiveMember> members;
};

ArchiveReport VerifyArchive(ByteView archive, const crypto::PublicKey& signer);

}  // namespace evote::committee

#endif  // EVOTE_COMMITTEE_ARCHIVE_H_
