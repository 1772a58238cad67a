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

#include "evote/credentials/signed_register.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "evote/common/binary_io.h"
#include "evote/common/error.h"

namespace evote::credentials {
namespace {

constexpr std::string_view kRegisterHeader = "evote-register v1";

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    auto pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

crypto::Signature CommSignature(std::string_view b64) {
  return {Base64Decode(b64), crypto::KeyPurpose::kCommunication};
}

}  // namespace

const CredentialRecord* SignedRegister::Find(std::string_view voter_id) const {
  auto it = std::lower_bound(records.begin(), records.end(), voter_id,
                             [](const CredentialRecord& r, std::string_view id) {
                               return r.voter_id < id;
                             });
  if (it != records.end() && it->voter_id == voter_id) return &*it;
  // Registers parsed from untrusted files need not be sorted.
  for (const auto& r : records) {
    if (r.voter_id == voter_id) return &r;
  }
  return nullptr;
}

Bytes CanonicalRecords(const std::vector<CredentialRecord>& records) {
  BinaryWriter w;
  w.U64(records.size());
  for (const auto& r : records) {
    w.Field(r.voter_id).Field(r.pw_hash.view()).Field(r.sig_ers.bytes).Field(r.sig_vs.bytes);
  }
  return w.Take();
}

SignedRegister BuildSignedRegister(std::vector<CredentialRecord> records,
                                   const crypto::PrivateKey& ers_communication) {
  crypto::RequirePurpose(ers_communication, crypto::KeyPurpose::kCommunication);
  if (records.empty()) throw Error(ErrorCode::kInvalidArgument, "register is empty");
  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.voter_id < b.voter_id; });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].voter_id == records[i - 1].voter_id) {
      throw Error(ErrorCode::kAlreadyExists, "duplicate voter id in register");
    }
  }
  SignedRegister reg;
  reg.register_signature = crypto::Sign(ers_communication, CanonicalRecords(records));
  reg.records = std::move(records);
  return reg;
}

bool RegisterReport::ok() const {
  if (malformed || !register_signature_ok) return false;
  return std::all_of(entries.begin(), entries.end(), [](const Entry& e) {
    return e.ers_signature_ok && e.vs_signature_ok;
  });
}

std::vector<std::string> RegisterReport::FlaggedRecords() const {
  std::vector<std::string> out;
  for (const auto& e : entries) {
    if (!e.ers_signature_ok || !e.vs_signature_ok) out.push_back(e.voter_id);
  }
  return out;
}

RegisterReport VerifyRegister(const SignedRegister& reg, const crypto::PublicKey& ers,
                              const crypto::PublicKey& vs) {
  RegisterReport report;
  if (reg.records.empty()) {
    report.malformed = true;
    report.malformed_reason = "register has no records";
    return report;
  }
  std::set<std::string> ids;
  for (const auto& r : reg.records) {
    if (!ids.insert(r.voter_id).second) {
      report.malformed = true;
      report.malformed_reason = "duplicate voter id";
    }
    report.entries.push_back({r.voter_id, VerifyErsSignature(r, ers), VerifyVsSignature(r, vs)});
  }
  report.register_signature_ok =
      crypto::Verify(ers, CanonicalRecords(reg.records), reg.register_signature);
  return report;
}

std::string SerializeRegister(const SignedRegister& reg) {
  std::ostringstream out;
  out << kRegisterHeader << '\n';
  for (const auto& r : reg.records) {
    out << "R\t" << r.voter_id << '\t' << Base64Encode(r.pw_hash.view()) << '\t'
        << Base64Encode(r.sig_ers.bytes) << '\t' << Base64Encode(r.sig_vs.bytes) << '\n';
  }
  out << "S\t" << Base64Encode(reg.register_signature.bytes) << '\n';
  return out.str();
}

SignedRegister ParseRegister(std::string_view text) {
  auto lines = Split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines[0] != kRegisterHeader) {
    throw Error(ErrorCode::kMalformed, "missing register header");
  }
  SignedRegister reg;
  bool have_signature = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto fields = Split(lines[i], '\t');
    if (have_signature) throw Error(ErrorCode::kMalformed, "data after signature line");
    if (fields[0] == "R" && fields.size() == 5) {
      CredentialRecord r;
      r.voter_id = std::string(fields[1]);
      r.pw_hash = crypto::Digest::FromBytes(Base64Decode(fields[2]));
      r.sig_ers = CommSignature(fields[3]);
      r.sig_vs = CommSignature(fields[4]);
      reg.records.push_back(std::move(r));
    } else if (fields[0] == "S" && fields.size() == 2) {
      reg.register_signature = CommSignature(fields[1]);
      have_signature = true;
    } else {
      throw Error(ErrorCode::kMalformed, "bad register line " + std::to_string(i + 1));
    }
  }
  if (!have_signature) throw Error(ErrorCode::kMalformed, "missing register signature");
  if (reg.records.empty()) throw Error(ErrorCode::kMalformed, "register has no records");
  return reg;
}

RegisterReport VerifyRegisterFile(std::string_view text, const crypto::PublicKey& ers,
                                  const crypto::PublicKey& vs) {
  try {
    return VerifyRegister(ParseRegister(text), ers, vs);
  } catch (const Error& e) {
    RegisterReport report;
    report.malformed = true;
    report.malformed_reason = e.what();
    return report;
  }
}

}  // namespace evote::credentials
