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

#include <set>

#include <gtest/gtest.h>

#include "evote/common/error.h"
#include "evote/credentials/credentials.h"
#include "evote/credentials/signed_register.h"

namespace {

using namespace evote::credentials;
using evote::Error;
using evote::ErrorCode;
using evote::crypto::GenerateKeyPair;
using evote::crypto::KeyPair;
using evote::crypto::KeyPurpose;

struct Keys {
  KeyPair ers = GenerateKeyPair(KeyPurpose::kCommunication, 100);
  KeyPair vs = GenerateKeyPair(KeyPurpose::kCommunication, 101);
};

std::vector<CredentialRecord> SignAll(const std::vector<Credential>& creds, const Keys& k) {
  std::vector<CredentialRecord> out;
  for (const auto& c : creds) out.push_back(SignCredential(c, k.ers.private_key, k.vs.private_key));
  return out;
}

TEST(GenerateCredentials, SingleCredentialMeetsPolicy) {
  auto creds = GenerateCredentials(1);
  ASSERT_EQ(creds.size(), 1u);
  EXPECT_GE(creds[0].password.size(), 12u);
  EXPECT_TRUE(PasswordPolicy{}.Complies(creds[0].password));
  EXPECT_TRUE(PasswordPolicy{}.Complies(creds[0].voter_id + "xxxx"));
}

TEST(GenerateCredentials, ThousandDistinctIds) {
  auto creds = GenerateCredentials(1000);
  std::set<std::string> ids;
  for (const auto& c : creds) ids.insert(c.voter_id);
  EXPECT_EQ(ids.size(), 1000u);
}

TEST(GenerateCredentials, SeededIsDeterministic) {
  auto a = GenerateCredentials(20, {}, 9);
  auto b = GenerateCredentials(20, {}, 9);
  EXPECT_EQ(ExportCredentials(a).file, ExportCredentials(b).file);
  auto c = GenerateCredentials(20, {}, 10);
  EXPECT_NE(ExportCredentials(a).file, ExportCredentials(c).file);
}

TEST(GenerateCredentials, AlphabetHasNoAmbiguousCharacters) {
  for (char c : std::string_view("0O1lI")) {
    EXPECT_EQ(kUnambiguousAlphabet.find(c), std::string_view::npos) << c;
  }
  EXPECT_THROW(GenerateCredentials(0), Error);
  PasswordPolicy weak;
  weak.length = 8;
  EXPECT_THROW(GenerateCredentials(1, weak), Error);
}

TEST(SignCredential, BothChainEquationsHold) {
  Keys k;
  for (const auto& c : GenerateCredentials(25, {}, 3)) {
    auto r = SignCredential(c, k.ers.private_key, k.vs.private_key);
    EXPECT_EQ(r.pw_hash, evote::crypto::HashBytes(c.password));
    EXPECT_TRUE(evote::crypto::Verify(k.ers.public_key, r.pw_hash.view(), r.sig_ers));
    EXPECT_TRUE(evote::crypto::Verify(k.vs.public_key, r.sig_ers.bytes, r.sig_vs));
  }
}

TEST(SignCredential, TamperedHashBreaksAVerification) {
  Keys k;
  auto r = SignCredential(GenerateCredentials(1, {}, 4)[0], k.ers.private_key, k.vs.private_key);
  for (std::size_t i = 0; i < r.pw_hash.bytes.size(); ++i) {
    auto t = r;
    t.pw_hash.bytes[i] ^= 0x01;
    EXPECT_FALSE(VerifyErsSignature(t, k.ers.public_key) && VerifyVsSignature(t, k.vs.public_key));
  }
}

TEST(SignCredential, RejectsWrongPurpose) {
  Keys k;
  auto db = GenerateKeyPair(KeyPurpose::kDatabase, 5);
  auto c = GenerateCredentials(1)[0];
  EXPECT_THROW(SignCredential(c, db.private_key, k.vs.private_key), Error);
  EXPECT_THROW(SignCredential(c, k.ers.private_key, db.private_key), Error);
}

TEST(SignedRegister, FreshRegisterVerifies) {
  Keys k;
  auto reg = BuildSignedRegister(SignAll(GenerateCredentials(3, {}, 1), k), k.ers.private_key);
  auto report = VerifyRegister(reg, k.ers.public_key, k.vs.public_key);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.entries.size(), 3u);
}

TEST(SignedRegister, ReorderBreaksSignature) {
  Keys k;
  auto reg = BuildSignedRegister(SignAll(GenerateCredentials(3, {}, 1), k), k.ers.private_key);
  std::swap(reg.records[0], reg.records[2]);
  auto report = VerifyRegister(reg, k.ers.public_key, k.vs.public_key);
  EXPECT_FALSE(report.register_signature_ok);
  EXPECT_FALSE(report.ok());
}

TEST(SignedRegister, EveryMutationKindBreaksSignature) {
  Keys k;
  auto records = SignAll(GenerateCredentials(4, {}, 2), k);
  auto extra = SignCredential(GenerateCredentials(5, {}, 77)[4], k.ers.private_key, k.vs.private_key);
  const auto reg = BuildSignedRegister(records, k.ers.private_key);
  auto check_broken = [&](SignedRegister m, const char* what) {
    EXPECT_FALSE(VerifyRegister(m, k.ers.public_key, k.vs.public_key).register_signature_ok) << what;
  };
  for (std::size_t i = 0; i < reg.records.size(); ++i) {
    auto m = reg;
    m.records[i].voter_id += "x";
    check_broken(m, "id");
    m = reg;
    m.records[i].sig_vs.bytes[0] ^= 1;
    check_broken(m, "sig_vs");
    m = reg;
    m.records.erase(m.records.begin() + static_cast<long>(i));
    check_broken(m, "delete");
    m = reg;
    m.records.insert(m.records.begin() + static_cast<long>(i), extra);
    check_broken(m, "insert");
  }
}

TEST(SignedRegister, DuplicateIdRejectedBeforeSigning) {
  Keys k;
  auto records = SignAll(GenerateCredentials(2, {}, 1), k);
  records.push_back(records[0]);
  try {
    BuildSignedRegister(records, k.ers.private_key);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAlreadyExists);
  }
  EXPECT_THROW(BuildSignedRegister({}, k.ers.private_key), Error);
}

TEST(SignedRegister, ForgedVsSignatureFlagsExactlyThatRecord) {
  Keys k;
  auto reg = BuildSignedRegister(SignAll(GenerateCredentials(5, {}, 6), k), k.ers.private_key);
  auto forger = GenerateKeyPair(KeyPurpose::kCommunication, 666);
  reg.records[2].sig_vs = evote::crypto::Sign(forger.private_key, reg.records[2].sig_ers.bytes);
  auto report = VerifyRegister(reg, k.ers.public_key, k.vs.public_key);
  EXPECT_EQ(report.FlaggedRecords(), std::vector<std::string>{reg.records[2].voter_id});
  EXPECT_TRUE(report.entries[2].ers_signature_ok);
  EXPECT_FALSE(report.entries[2].vs_signature_ok);
}

TEST(SignedRegister, FileRoundTripAndMalformedInput) {
  Keys k;
  auto reg = BuildSignedRegister(SignAll(GenerateCredentials(3, {}, 8), k), k.ers.private_key);
  std::string text = SerializeRegister(reg);
  EXPECT_EQ(text.rfind("evote-register v1\n", 0), 0u);
  auto parsed = ParseRegister(text);
  EXPECT_EQ(parsed.records, reg.records);
  EXPECT_TRUE(VerifyRegisterFile(text, k.ers.public_key, k.vs.public_key).ok());

  auto empty = VerifyRegisterFile("", k.ers.public_key, k.vs.public_key);
  EXPECT_TRUE(empty.malformed);
  EXPECT_FALSE(empty.ok());
  auto garbage = VerifyRegisterFile("evote-register v1\nR\tx\n", k.ers.public_key, k.vs.public_key);
  EXPECT_TRUE(garbage.malformed);
}

TEST(ExportCredentials, RoundTripAndByteStable) {
  auto creds = GenerateCredentials(2, {}, 12);
  auto exported = ExportCredentials(creds);
  EXPECT_EQ(exported.file, ExportCredentials(GenerateCredentials(2, {}, 12)).file);
  EXPECT_EQ(ImportCredentials(exported.file), creds);
  int rows = 0;
  for (char c : exported.file) rows += c == '\n';
  EXPECT_EQ(rows, 3);  // header + 2
  ASSERT_EQ(exported.envelopes.size(), 2u);
  EXPECT_FALSE(exported.envelopes[0].revealed());
}

TEST(CredentialEnvelope, RevealIsOneWay) {
  auto creds = GenerateCredentials(1, {}, 13);
  auto exported = ExportCredentials(creds);
  auto& env = exported.envelopes[0];
  EXPECT_EQ(env.Reveal(), creds[0].password);
  EXPECT_TRUE(env.revealed());
  try {
    env.Reveal();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIllegalState);
  }
  EXPECT_TRUE(env.revealed());
}

}  // namespace
