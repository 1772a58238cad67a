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

#include "evote/ballotbox/vote_chain.h"

#include <openssl/evp.h>

#include <gtest/gtest.h>

#include <random>

#include "evote/common/error.h"
#include "evote/crypto/seal.h"

namespace evote::ballotbox {
namespace {

// Independent Ed25519 verification.
bool OpenSslVerify(const crypto::PublicKey& key, ByteView msg, const crypto::Signature& sig) {
  EVP_PKEY* pkey =
      EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, key.sign_key().data(), 32);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  bool ok = EVP_DigestVerifyInit(ctx, nullptr, nullptr, nullptr, pkey) == 1 &&
            EVP_DigestVerify(ctx, sig.bytes.data(), sig.bytes.size(), msg.data(), msg.size()) == 1;
  EVP_MD_CTX_free(ctx);
  EVP_PKEY_free(pkey);
  return ok;
}

class VoteChainTest : public ::testing::Test {
 protected:
  static constexpr std::size_t kB = 30;

  VoteChainTest()
      : comm_(crypto::GenerateKeyPair(crypto::KeyPurpose::kCommunication, 1)),
        db_(crypto::GenerateKeyPair(crypto::KeyPurpose::kDatabase, 2)) {}

  // 100 votes sealed in blocks of 30, 30, 30 and a final 10.
  VoteChain Build(int n = 100) {
    VoteChain chain;
    for (int i = 0; i < n; ++i) {
      chain.votes.push_back(MakeStoredVote(i, "c1=" + std::string(1, "abc"[i % 3]) + ";",
                                           db_.public_key, comm_.private_key));
      if (chain.votes.size() - chain.SealedVotes() == kB) {
        chain.blocks.push_back(SealBlock(chain, chain.SealedVotes(), kB, comm_.private_key));
      }
    }
    const std::int64_t rest = static_cast<std::int64_t>(chain.votes.size()) - chain.SealedVotes();
    if (rest > 0) chain.blocks.push_back(SealBlock(chain, chain.SealedVotes(), rest, comm_.private_key));
    return chain;
  }

  ChainReport Verify(const VoteChain& c) {
    return VerifyChain(c, comm_.public_key, kB, /*require_sealed=*/true);
  }

  crypto::KeyPair comm_;
  crypto::KeyPair db_;
};

TEST_F(VoteChainTest, UntamperedStorePasses) {
  VoteChain chain = Build();
  ASSERT_EQ(chain.blocks.size(), 4u);
  EXPECT_EQ(chain.blocks[3].count, 10);
  ChainReport r = Verify(chain);
  EXPECT_TRUE(r.ok()) << r.ToJson().dump();
}

TEST_F(VoteChainTest, SignaturesVerifyUnderIndependentImplementation) {
  VoteChain chain = Build();
  for (const auto& v : chain.votes) {
    EXPECT_TRUE(OpenSslVerify(comm_.public_key, v.envelope.Serialize(), v.vote_signature));
  }
  // Block message: member vote signatures, then the previous block
  // signature or 32 zero bytes.
  Bytes previous(32, 0);
  for (const auto& b : chain.blocks) {
    Bytes msg;
    for (std::int64_t i = b.first_sequence; i < b.first_sequence + b.count; ++i) {
      const auto& s = chain.votes[i].vote_signature.bytes;
      msg.insert(msg.end(), s.begin(), s.end());
    }
    msg.insert(msg.end(), previous.begin(), previous.end());
    EXPECT_TRUE(OpenSslVerify(comm_.public_key, msg, b.block_signature)) << b.block_no;
    previous = b.block_signature.bytes;
  }
}

TEST_F(VoteChainTest, VoteByteMutationDetected) {
  for (int k : {0, 31, 99}) {
    VoteChain chain = Build();
    chain.votes[k].envelope.ciphertext[5] ^= 0x01;
    ChainReport r = Verify(chain);
    EXPECT_FALSE(r.ok());
    EXPECT_EQ(r.bad_vote_signatures, std::vector<std::int64_t>{k});
  }
}

TEST_F(VoteChainTest, VoteSignatureMutationDetected) {
  VoteChain chain = Build();
  chain.votes[42].vote_signature.bytes[0] ^= 0x80;
  ChainReport r = Verify(chain);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.bad_vote_signatures.empty());
}

TEST_F(VoteChainTest, BlockSignatureMutationDetected) {
  VoteChain chain = Build();
  chain.blocks[1].block_signature.bytes[10] ^= 0x04;
  ChainReport r = Verify(chain);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.flagged_blocks.empty());
}

TEST_F(VoteChainTest, VoteDropDetected) {
  for (int k : {0, 50, 99}) {
    VoteChain chain = Build();
    chain.votes.erase(chain.votes.begin() + k);
    EXPECT_FALSE(Verify(chain).ok()) << k;
  }
}

TEST_F(VoteChainTest, VoteReorderDetected) {
  VoteChain chain = Build();
  std::swap(chain.votes[10], chain.votes[11]);
  EXPECT_FALSE(Verify(chain).ok());
  // Renumbering the swapped votes breaks their signatures instead.
  std::swap(chain.votes[10].sequence_no, chain.votes[11].sequence_no);
  EXPECT_FALSE(Verify(chain).ok());
}

TEST_F(VoteChainTest, BlockReorderDetected) {
  VoteChain chain = Build();
  std::swap(chain.blocks[0], chain.blocks[1]);
  EXPECT_FALSE(Verify(chain).ok());
  std::swap(chain.blocks[0].block_no, chain.blocks[1].block_no);
  EXPECT_FALSE(Verify(chain).ok());
}

TEST_F(VoteChainTest, BlockDropAndUnsealedTailDetected) {
  VoteChain chain = Build();
  chain.blocks.pop_back();
  ChainReport r = Verify(chain);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.unsealed_votes, 10);
  // While voting runs an unsealed tail shorter than a block is expected.
  EXPECT_TRUE(VerifyChain(chain, comm_.public_key, kB, false).ok());
}

TEST_F(VoteChainTest, WrongKeyRejectsEverything) {
  auto other = crypto::GenerateKeyPair(crypto::KeyPurpose::kCommunication, 9);
  ChainReport r = VerifyChain(Build(10), other.public_key, kB, true);
  EXPECT_EQ(r.bad_vote_signatures.size(), 10u);
}

TEST_F(VoteChainTest, RecordsRoundTrip) {
  VoteChain chain = Build();
  VoteChain again = VoteChain::FromRecords(chain.ToRecords());
  ASSERT_EQ(again.votes.size(), chain.votes.size());
  ASSERT_EQ(again.blocks.size(), chain.blocks.size());
  EXPECT_TRUE(Verify(again).ok());
}

TEST_F(VoteChainTest, AnySingleByteRecordMutationIsCaught) {
  VoteChain chain = Build(40);
  auto records = chain.ToRecords();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto mutated = records;
    auto& rec = mutated[rng() % mutated.size()];
    rec[rng() % rec.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    bool caught = false;
    try {
      caught = !Verify(VoteChain::FromRecords(mutated)).ok();
    } catch (const Error& e) {
      caught = e.code() == ErrorCode::kCorrupted || e.code() == ErrorCode::kMalformed;
    }
    EXPECT_TRUE(caught) << "trial " << trial;
  }
}

TEST_F(VoteChainTest, StoredVoteOpensToCanonicalContent) {
  VoteChain chain = Build(3);
  SecureBytes plain(crypto::Open(db_.private_key, chain.votes[1].envelope));
  EXPECT_EQ(ToString(plain.view()), "c1=b;");
}

}  // namespace
}  // namespace evote::ballotbox
