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

#include "evote/committee/archive.h"

#include <json.hpp>

#include "evote/common/binary_io.h"
#include "evote/common/error.h"
#include "evote/crypto/digest.h"

namespace evote::committee {
namespace {

constexpr std::string_view kMagic = "EVAR";
constexpr std::size_t kSignatureSize = 64;

}  // namespace

Bytes BuildArchive(const std::vector<ArchiveMember>& members, const crypto::PrivateKey& signer) {
  nlohmann::json manifest = nlohmann::json::array();
  for (const auto& m : members) {
    if (m.name == kManifestMember || m.name == kSignatureMember) {
      throw Error(ErrorCode::kInvalidArgument, "reserved archive member name");
    }
    manifest.push_back({{"name", m.name}, {"sha256", crypto::HashBytes(m.data).Hex()}});
  }
  BinaryWriter w;
  w.Raw(AsBytes(kMagic));
  w.U32(static_cast<std::uint32_t>(members.size() + 1));
  for (const auto& m : members) {
    w.Field(AsBytes(m.name));
    w.Field(m.data);
  }
  const std::string manifest_text = manifest.dump(1);
  w.Field(AsBytes(kManifestMember));
  w.Field(AsBytes(manifest_text));
  Bytes body = w.Take();
  Bytes sigs = crypto::Sign(signer, body).bytes;
  Bytes manifest_sig = crypto::Sign(signer, AsBytes(manifest_text)).bytes;
  sigs.insert(sigs.end(), manifest_sig.begin(), manifest_sig.end());
  BinaryWriter tail;
  tail.Field(AsBytes(kSignatureMember));
  tail.Field(sigs);
  Bytes t = tail.Take();
  body.insert(body.end(), t.begin(), t.end());
  return body;
}

ArchiveReport VerifyArchive(ByteView archive, const crypto::PublicKey& signer) {
  ArchiveReport report;
  auto fail = [&](std::string member, std::string issue) {
    if (report.broken_member.empty()) report.broken_member = std::move(member);
    report.issues.push_back(std::move(issue));
  };
  std::size_t signed_len = 0;
  Bytes signature;
  try {
    BinaryReader r(archive);
    if (ToString(r.Raw(kMagic.size())) != kMagic) {
      throw Error(ErrorCode::kMalformed, "not an archive");
    }
    const std::uint32_t count = r.U32();
    for (std::uint32_t i = 0; i < count; ++i) {
      ArchiveMember m;
      m.name = r.FieldString();
      m.data = r.Field();
      report.members.push_back(std::move(m));
    }
    signed_len = r.position();
    if (r.FieldString() != kSignatureMember) throw Error(ErrorCode::kMalformed, "no signature");
    signature = r.Field();
    if (!r.AtEnd()) throw Error(ErrorCode::kMalformed, "trailing bytes");
  } catch (const Error& e) {
    report.issues.push_back(std::string("archive does not parse: ") + e.what());
    return report;
  }

  if (signature.size() != 2 * kSignatureSize) {
    fail(std::string(kSignatureMember), "signature record has the wrong size");
    return report;
  }
  auto verify = [&](ByteView message, std::size_t at) {
    crypto::Signature sig{Bytes(signature.begin() + at, signature.begin() + at + kSignatureSize),
                          crypto::KeyPurpose::kCommunication};
    return crypto::Verify(signer, message, sig);
  };
  const bool archive_sig_ok = verify(archive.subspan(0, signed_len), 0);
  const bool has_manifest =
      !report.members.empty() && report.members.back().name == kManifestMember;
  const bool manifest_sig_ok =
      has_manifest && verify(report.members.back().data, kSignatureSize);

  // With one member altered, the pair of signatures says whether the
  // manifest itself can be trusted to name it.
  if (!has_manifest) {
    fail(std::string(kManifestMember), "manifest missing");
  } else if (!manifest_sig_ok) {
    fail(archive_sig_ok ? std::string(kSignatureMember) : std::string(kManifestMember),
         archive_sig_ok ? "manifest signature invalid" : "manifest altered");
  }
  if (has_manifest) {
    nlohmann::json manifest;
    try {
      manifest = nlohmann::json::parse(ToString(report.members.back().data));
    } catch (const nlohmann::json::exception&) {
      fail(std::string(kManifestMember), "manifest does not parse");
    }
    const std::size_t listed = report.members.size() - 1;
    if (manifest.is_array() && manifest.size() == listed) {
      for (std::size_t i = 0; i < listed; ++i) {
        const auto& m = report.members[i];
        const auto& entry = manifest[i];
        if (!entry.is_object() || entry.value("name", "") != m.name) {
          fail(m.name, "member " + m.name + " not in manifest");
        } else if (entry.value("sha256", "") != crypto::HashBytes(m.data).Hex()) {
          fail(m.name, "member " + m.name + " digest mismatch");
        }
      }
    } else if (report.issues.empty()) {
      fail(std::string(kManifestMember), "manifest does not list the members");
    }
  }
  if (!archive_sig_ok) fail(std::string(kSignatureMember), "archive signature invalid");
  report.ok = report.issues.empty();
  return report;
}

}  // namespace evote::committee
