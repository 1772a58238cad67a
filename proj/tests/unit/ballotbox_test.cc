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

#include "evote/ballotbox/ballotbox_service.h"

#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "evote/common/error.h"
#include "evote/harness/deployment.h"

namespace evote::ballotbox {
namespace {

using harness::Deployment;

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kTransport;  // no error
}

harness::ElectionConfig SmallConfig() {
  harness::ElectionConfig c;
  c.ballot = harness::DefaultBallot();
  c.officers = {{"o1", "pw-1"}, {"o2", "pw-2"}, {"o3", "pw-3"}};
  c.block_size = 4;
  c.voters = 8;
  return c;
}

VoteContent Pick(const std::string& option) { return VoteContent::FromJson({{"c1", {option}}}); }

class BallotBoxTest : public ::testing::Test {
 protected:
  BallotBoxTest() : d_(SmallConfig(), 17) {
    d_.StartCommittee();
    d_.OpenElection();
  }

  BallotBoxService& bbs() { return d_.ballot_box(); }

  VoterToken TokenFor(std::size_t voter) {
    auto outcome = d_.Login(d_.credentials().at(voter));
    EXPECT_EQ(outcome.kind, registry::AuthOutcome::Kind::kTokenIssued);
    return Deployment::TokenOf(outcome);
  }

  void Cast(std::size_t voter, const std::string& option) {
    VoterToken t = TokenFor(voter);
    bbs().SubmitVote(t, Pick(option));
    ASSERT_TRUE(bbs().ConfirmVote(t).committed);
  }

  wire::StateAttestation Attestation(std::string state, std::string action,
                                     std::vector<std::string> approvals = {"o1", "o2"},
                                     int threshold = 2) {
    return wire::Attest(std::move(state), std::move(action), std::move(approvals), threshold,
                        d_.clock().Now(), d_.keyring(Component::kCommittee).Communication());
  }

  Deployment d_;
};

TEST_F(BallotBoxTest, EchoThenConfirmStoresOnce) {
  VoterToken t = TokenFor(0);
  EXPECT_EQ(bbs().FetchBallot(t).ballot_id, "ballot-1");
  EXPECT_EQ(bbs().SubmitVote(t, Pick("b")), "c1=b;");
  EXPECT_EQ(bbs().StoredCount(), 0);
  EXPECT_TRUE(bbs().ConfirmVote(t).committed);
  EXPECT_EQ(bbs().StoredCount(), 1);
  EXPECT_EQ(CodeOf([&] { bbs().ConfirmVote(t); }), ErrorCode::kNotFound);
  EXPECT_EQ(CodeOf([&] { bbs().FetchBallot(t); }), ErrorCode::kNotFound);
  EXPECT_EQ(d_.Login(d_.credentials()[0]).kind, registry::AuthOutcome::Kind::kAlreadyVoted);
}

TEST_F(BallotBoxTest, ForgedTokensAreUnknown) {
  VoterToken real = TokenFor(0);
  VoterToken forged{SecureBytes(Bytes(32, 0x5a)), real.signature};
  EXPECT_EQ(CodeOf([&] { bbs().FetchBallot(forged); }), ErrorCode::kNotFound);
  VoterToken unsigned_token{SecureBytes(real.value.view()), {}};
  EXPECT_EQ(CodeOf([&] { bbs().SubmitVote(unsigned_token, Pick("a")); }), ErrorCode::kNotFound);
  EXPECT_NO_THROW(bbs().FetchBallot(real));
}

TEST_F(BallotBoxTest, InvalidVoteLeavesTokenUsable) {
  VoterToken t = TokenFor(1);
  EXPECT_EQ(CodeOf([&] { bbs().SubmitVote(t, VoteContent::FromJson({{"c1", {"a", "b"}}})); }),
            ErrorCode::kMalformed);
  EXPECT_EQ(CodeOf([&] { bbs().ConfirmVote(t); }), ErrorCode::kIllegalState);
  EXPECT_EQ(bbs().SubmitVote(t, Pick("c")), "c1=c;");
}

TEST_F(BallotBoxTest, LastSubmissionBeforeConfirmCounts) {
  VoterToken t = TokenFor(2);
  bbs().SubmitVote(t, Pick("a"));
  bbs().SubmitVote(t, Pick("c"));
  bbs().ConfirmVote(t);
  d_.AuthorizeStop();
  d_.FinishStop();
  TallyResult r = d_.Tally();
  EXPECT_EQ(r.Find("c1")->counts.at("c"), 1);
  EXPECT_EQ(r.Find("c1")->counts.at("a"), 0);
}

TEST_F(BallotBoxTest, CancelReleasesTheVoter) {
  VoterToken t = TokenFor(3);
  bbs().SubmitVote(t, Pick("a"));
  bbs().Cancel(t);
  EXPECT_EQ(CodeOf([&] { bbs().ConfirmVote(t); }), ErrorCode::kNotFound);
  EXPECT_EQ(bbs().StoredCount(), 0);
  Cast(3, "b");
  EXPECT_EQ(bbs().StoredCount(), 1);
}

TEST_F(BallotBoxTest, ConcurrentConfirmsCommitExactlyOnce) {
  VoterToken t = TokenFor(4);
  bbs().SubmitVote(t, Pick("a"));
  std::atomic<int> committed{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] {
      try {
        if (bbs().ConfirmVote(t).committed) ++committed;
      } catch (const Error&) {
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(committed.load(), 1);
  EXPECT_EQ(bbs().StoredCount(), 1);
}

TEST_F(BallotBoxTest, AttestationsGateCommitteeOperations) {
  EXPECT_EQ(CodeOf([&] { bbs().Tally(Attestation("Stopped", "tally", {"o1"}, 1)); }),
            ErrorCode::kPermissionDenied);
  EXPECT_EQ(CodeOf([&] { bbs().Tally(Attestation("Stopped", "tally", {"o1", "o1"})); }),
            ErrorCode::kPermissionDenied);
  EXPECT_EQ(CodeOf([&] { bbs().Tally(Attestation("Voting", "tally")); }),
            ErrorCode::kPermissionDenied);
  EXPECT_EQ(CodeOf([&] { bbs().Tally(Attestation("Stopped", "stop")); }),
            ErrorCode::kPermissionDenied);
  auto other = crypto::GenerateKeyPair(crypto::KeyPurpose::kCommunication, 77);
  EXPECT_EQ(CodeOf([&] {
              bbs().Tally(wire::Attest("Stopped", "tally", {"o1", "o2"}, 2, d_.clock().Now(),
                                       other.private_key));
            }),
            ErrorCode::kPermissionDenied);
  auto stale = Attestation("Stopped", "tally");
  d_.Advance(10 * kMinute);
  EXPECT_EQ(CodeOf([&] { bbs().Tally(stale); }), ErrorCode::kPermissionDenied);
}

TEST_F(BallotBoxTest, IntermediateResultsAreRefused) {
  Cast(0, "a");
  EXPECT_EQ(CodeOf([&] { bbs().Tally(Attestation("Stopped", "tally")); }),
            ErrorCode::kIllegalState);
  EXPECT_TRUE(bbs().accepting());
}

TEST_F(BallotBoxTest, StopSealsRemainderAndTallyCounts) {
  for (std::size_t i = 0; i < 5; ++i) Cast(i, i % 2 == 0 ? "a" : "b");
  EXPECT_EQ(bbs().chain().blocks.size(), 1u);
  bbs().Stop(Attestation("Stopped", "stop"));
  EXPECT_FALSE(bbs().accepting());
  EXPECT_EQ(bbs().chain().blocks.size(), 2u);
  EXPECT_TRUE(bbs().VerifyChain().ok());
  auto att = Attestation("Stopped", "tally");
  TallyResult r = bbs().Tally(att);
  EXPECT_EQ(r.total_votes, 5);
  EXPECT_EQ(r.Find("c1")->counts.at("a"), 3);
  EXPECT_EQ(r.Find("c1")->counts.at("b"), 2);
  EXPECT_TRUE(VerifyTally(r, d_.directory().at(Component::kBallotBox).communication));
  EXPECT_EQ(CodeOf([&] { bbs().Tally(att); }), ErrorCode::kPermissionDenied);  // single use
  EXPECT_EQ(CodeOf([&] { bbs().RegisterToken(Bytes(32, 1)); }), ErrorCode::kIllegalState);
}

TEST_F(BallotBoxTest, RestartWipesTokensAndKeepsVotes) {
  Cast(0, "a");
  Cast(1, "c");
  VoterToken held = TokenFor(2);
  bbs().SubmitVote(held, Pick("b"));
  bbs().Restart();
  EXPECT_EQ(bbs().live_tokens(), 0u);
  EXPECT_EQ(bbs().StoredCount(), 2);
  EXPECT_EQ(CodeOf([&] { bbs().ConfirmVote(held); }), ErrorCode::kNotFound);
  EXPECT_TRUE(bbs().VerifyChain().ok());
  Cast(2, "b");
  EXPECT_EQ(bbs().StoredCount(), 3);
}

TEST_F(BallotBoxTest, ClearDestroysVotesAndLocksKeys) {
  Cast(0, "a");
  bbs().Stop(Attestation("Stopped", "stop"));
  EXPECT_EQ(CodeOf([&] { bbs().ClearVotes(Attestation("Stopped", "clear", {"o3"}, 1)); }),
            ErrorCode::kPermissionDenied);
  bbs().ClearVotes(Attestation("Stopped", "clear"));
  EXPECT_EQ(bbs().StoredCount(), 0);
  EXPECT_FALSE(bbs().keyring().IsUnlocked(crypto::KeyPurpose::kCommunication));
}

TEST_F(BallotBoxTest, StoreHoldsNoTokenOrPlaintext) {
  VoterToken t = TokenFor(5);
  Bytes token = ToBytes(t.value.view());
  bbs().SubmitVote(t, Pick("c"));
  bbs().ConfirmVote(t);
  const std::string image = bbs().DatabaseImage();
  EXPECT_FALSE(ContainsBytes(AsBytes(image), token));
  EXPECT_EQ(image.find(HexEncode(token)), std::string::npos);
  EXPECT_EQ(image.find("c1=c;"), std::string::npos);
}

}  // namespace
}  // namespace evote::ballotbox
