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

#include "evote/ballotbox/ballot.h"

#include <gtest/gtest.h>

#include <random>

#include "evote/common/error.h"

namespace evote::ballotbox {
namespace {

using nlohmann::json;

Ballot TwoContests() {
  Ballot b;
  b.ballot_id = "b";
  b.contests.push_back({"mayor", {"ann", "bob", "cy"}, 0, 1});
  b.contests.push_back({"council", {"u", "v", "w", "x"}, 1, 2});
  return b;
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kTransport;
}

TEST(BallotTest, NormalizeFillsOptionalContests) {
  Ballot b = TwoContests();
  VoteContent v = Normalize(b, VoteContent::FromJson({{"council", {"u"}}}));
  EXPECT_EQ(v.Canonical(), "council=u;mayor=;");
}

TEST(BallotTest, NormalizeRefusesRuleViolations) {
  Ballot b = TwoContests();
  EXPECT_EQ(CodeOf([&] { Normalize(b, VoteContent::FromJson({{"mayor", {"ann"}}})); }),
            ErrorCode::kMalformed);  // council needs one selection
  EXPECT_EQ(CodeOf([&] {
              Normalize(b, VoteContent::FromJson({{"council", {"u"}}, {"mayor", {"ann", "bob"}}}));
            }),
            ErrorCode::kMalformed);
  EXPECT_EQ(CodeOf([&] { Normalize(b, VoteContent::FromJson({{"council", {"zed"}}})); }),
            ErrorCode::kMalformed);
  EXPECT_EQ(CodeOf([&] { Normalize(b, VoteContent::FromJson({{"senate", {"u"}}})); }),
            ErrorCode::kMalformed);
  EXPECT_EQ(CodeOf([] { VoteContent::FromJson({{"council", {"u", "u"}}}); }),
            ErrorCode::kMalformed);
}

TEST(BallotTest, ExplicitInvalidIsAlwaysAccepted) {
  Ballot b = TwoContests();
  VoteContent v = Normalize(b, VoteContent::FromJson({{"council", kInvalidMarker}}));
  EXPECT_EQ(v.Canonical(), "council=!invalid;mayor=;");
}

TEST(BallotTest, CanonicalFormRoundTrips) {
  Ballot b = TwoContests();
  std::mt19937_64 rng(4);
  for (int i = 0; i < 500; ++i) {
    json j = json::object();
    if (rng() % 2) j["mayor"] = json::array({b.contests[0].options[rng() % 3]});
    if (rng() % 5 == 0) {
      j["council"] = kInvalidMarker;
    } else {
      std::set<std::string> picks{b.contests[1].options[rng() % 4]};
      if (rng() % 2) picks.insert(b.contests[1].options[rng() % 4]);
      j["council"] = picks;
    }
    VoteContent v = Normalize(b, VoteContent::FromJson(j));
    const std::string c = v.Canonical();
    EXPECT_EQ(VoteContent::ParseCanonical(c).Canonical(), c);
    EXPECT_EQ(Normalize(b, VoteContent::FromJson(v.ToJson())).Canonical(), c);
  }
}

TEST(BallotTest, ParseCanonicalRejectsNonCanonicalText) {
  EXPECT_THROW(VoteContent::ParseCanonical("b=x;a=y;"), Error);
  EXPECT_THROW(VoteContent::ParseCanonical("a=y,x;"), Error);
  EXPECT_THROW(VoteContent::ParseCanonical("a=y"), Error);
}

TEST(BallotTest, CountingMatchesHandCount) {
  Ballot b = TwoContests();
  TallyResult t = EmptyTally(b);
  CountVote(t, Normalize(b, VoteContent::FromJson({{"council", {"u", "v"}}, {"mayor", {"ann"}}})));
  CountVote(t, Normalize(b, VoteContent::FromJson({{"council", {"u"}}})));
  CountVote(t, Normalize(b, VoteContent::FromJson({{"council", kInvalidMarker},
                                                   {"mayor", kInvalidMarker}})));
  EXPECT_EQ(t.total_votes, 3);
  const ContestTally* mayor = t.Find("mayor");
  EXPECT_EQ(mayor->counts.at("ann"), 1);
  EXPECT_EQ(mayor->invalid, 1);
  EXPECT_EQ(mayor->valid_ballots, 2);
  const ContestTally* council = t.Find("council");
  EXPECT_EQ(council->counts.at("u"), 2);
  EXPECT_EQ(council->counts.at("v"), 1);
  EXPECT_EQ(council->invalid, 1);
  for (const auto& c : t.contests) EXPECT_EQ(c.valid_ballots + c.invalid, t.total_votes);
}

TEST(BallotTest, TallySignatureCoversCounts) {
  auto key = crypto::GenerateKeyPair(crypto::KeyPurpose::kCommunication, 5);
  TallyResult t = EmptyTally(TwoContests());
  CountVote(t, Normalize(TwoContests(), VoteContent::FromJson({{"council", {"w"}}})));
  t.signature = crypto::Sign(key.private_key, AsBytes(t.CanonicalBytes()));
  EXPECT_TRUE(VerifyTally(t, key.public_key));
  TallyResult again = TallyResult::FromJson(json::parse(t.ToJson().dump()));
  EXPECT_TRUE(VerifyTally(again, key.public_key));
  again.contests[1].counts["w"] = 2;
  EXPECT_FALSE(VerifyTally(again, key.public_key));
}

TEST(BallotTest, BallotChecksItsOwnShape) {
  Ballot b = TwoContests();
  b.contests[0].max_selections = 5;
  EXPECT_THROW(b.Check(), Error);
  b = TwoContests();
  b.contests.push_back(b.contests[0]);
  EXPECT_THROW(b.Check(), Error);
  EXPECT_EQ(Ballot::FromJson(TwoContests().ToJson()).ToJson(), TwoContests().ToJson());
}

}  // namespace
}  // namespace evote::ballotbox
