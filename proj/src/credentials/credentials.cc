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

#include "evote/credentials/credentials.h"

#include <memory>
#include <set>
#include <sstream>

#include "evote/common/error.h"
#include "evote/common/random.h"

namespace evote::credentials {
namespace {

constexpr std::size_t kMinPasswordLength = 12;
constexpr std::size_t kIdSequenceChars = 4;
constexpr std::size_t kIdSuffixChars = 4;
constexpr std::string_view kCredentialHeader = "evote-credentials v1";

std::string EncodeSequence(std::uint64_t n, std::string_view alphabet) {
  std::string out(kIdSequenceChars, alphabet[0]);
  for (std::size_t i = kIdSequenceChars; i-- > 0;) {
    out[i] = alphabet[n % alphabet.size()];
    n /= alphabet.size();
  }
  return out;
}

std::string RandomChars(RandomSource& rng, std::size_t n, std::string_view alphabet) {
  std::string out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(alphabet[rng.Uniform(alphabet.size())]);
  return out;
}

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    lines.push_back(text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

}  // namespace

void PasswordPolicy::Check() const {
  if (length < kMinPasswordLength) {
    throw Error(ErrorCode::kInvalidArgument, "password length must be at least 12");
  }
  std::set<char> seen(alphabet.begin(), alphabet.end());
  if (alphabet.size() < 2 || seen.size() != alphabet.size()) {
    throw Error(ErrorCode::kInvalidArgument, "alphabet must have distinct characters");
  }
}

bool PasswordPolicy::Complies(std::string_view password) const {
  if (password.size() < length) return false;
  for (char c : password) {
    if (alphabet.find(c) == std::string::npos) return false;
  }
  return true;
}

std::vector<Credential> GenerateCredentials(std::size_t count, const PasswordPolicy& policy,
                                            std::optional<std::uint64_t> seed) {
  if (count == 0) throw Error(ErrorCode::kInvalidArgument, "count must be positive");
  policy.Check();
  std::uint64_t capacity = 1;
  for (std::size_t i = 0; i < kIdSequenceChars; ++i) capacity *= policy.alphabet.size();
  if (count > capacity) throw Error(ErrorCode::kInvalidArgument, "too many credentials");

  std::unique_ptr<RandomSource> seeded;
  if (seed) seeded = std::make_unique<SeededRandom>(*seed);
  RandomSource& rng = seeded ? *seeded : DefaultRandom();

  std::vector<Credential> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Credential c;
    c.voter_id = EncodeSequence(i, policy.alphabet) +
                 RandomChars(rng, kIdSuffixChars, policy.alphabet);
    c.password = RandomChars(rng, policy.length, policy.alphabet);
    out.push_back(std::move(c));
  }
  return out;
}

CredentialRecord SignCredential(const Credential& credential,
                                const crypto::PrivateKey& ers_communication,
                                const crypto::PrivateKey& vs_communication) {
  crypto::RequirePurpose(ers_communication, crypto::KeyPurpose::kCommunication);
  crypto::RequirePurpose(vs_communication, crypto::KeyPurpose::kCommunication);
  CredentialRecord r;
  r.voter_id = credential.voter_id;
  r.pw_hash = crypto::HashBytes(credential.password);
  r.sig_ers = crypto::Sign(ers_communication, r.pw_hash.view());
  r.sig_vs = crypto::Sign(vs_communication, r.sig_ers.bytes);
  return r;
}

bool VerifyErsSignature(const CredentialRecord& record, const crypto::PublicKey& ers) {
  return crypto::Verify(ers, record.pw_hash.view(), record.sig_ers);
}

bool VerifyVsSignature(const CredentialRecord& record, const crypto::PublicKey& vs) {
  return crypto::Verify(vs, record.sig_ers.bytes, record.sig_vs);
}

CredentialEnvelope::CredentialEnvelope(std::string voter_id, std::string_view password)
    : voter_id_(std::move(voter_id)), covered_secret_(AsBytes(password)) {}

std::string CredentialEnvelope::Reveal() {
  if (revealed_) throw Error(ErrorCode::kIllegalState, "credential already revealed");
  revealed_ = true;
  std::string out = ToString(covered_secret_.view());
  covered_secret_.Wipe();
  return out;
}

CredentialExport ExportCredentials(const std::vector<Credential>& credentials,
                                   CredentialFormat format) {
  if (format != CredentialFormat::kTsv) {
    throw Error(ErrorCode::kInvalidArgument, "unsupported credential format");
  }
  CredentialExport out;
  std::ostringstream file;
  file << kCredentialHeader << '\n';
  for (const auto& c : credentials) {
    if (c.voter_id.find_first_of("\t\n") != std::string::npos ||
        c.password.find_first_of("\t\n") != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "credential contains a separator");
    }
    file << c.voter_id << '\t' << c.password << '\n';
    out.envelopes.emplace_back(c.voter_id, c.password);
  }
  out.file = file.str();
  return out;
}

std::vector<Credential> ImportCredentials(std::string_view file) {
  auto lines = SplitLines(file);
  if (lines.empty() || lines[0] != kCredentialHeader) {
    throw Error(ErrorCode::kMalformed, "missing credential file header");
  }
  std::vector<Credential> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto tab = lines[i].find('\t');
    if (tab == std::string_view::npos || lines[i].find('\t', tab + 1) != std::string_view::npos) {
      throw Error(ErrorCode::kMalformed, "bad credential line " + std::to_string(i + 1));
    }
    out.push_back({std::string(lines[i].substr(0, tab)), std::string(lines[i].substr(tab + 1))});
  }
  return out;
}

}  // namespace evote::credentials
