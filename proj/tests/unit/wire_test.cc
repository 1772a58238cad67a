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

#include "evote/wire/envelope.h"

#include <gtest/gtest.h>

#include "evote/common/error.h"
#include "evote/wire/attestation.h"
#include "evote/wire/bus.h"
#include "evote/wire/faults.h"
#include "support/test_keys.h"

namespace evote::wire {
namespace {

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kTransport;  // no error
}

// Replies with what it was sent.
class Echo final : public MessageHandler {
 public:
  Json Handle(Component from, std::string_view type, const Json& body) override {
    ++calls;
    if (type == "fail") throw Error(ErrorCode::kIllegalState, "asked to fail");
    return Json{{"from", std::string(ComponentName(from))}, {"type", type}, {"body", body}};
  }
  int calls = 0;
};

class WireTest : public ::testing::Test {
 protected:
  WireTest() : bus_(&sim_) {
    for (Component c : kAllComponents) {
      keys_.Unlock(c);
      clocks_.emplace(c, std::make_unique<SkewedClock>(sim_));
      bus_.Attach(c, echo_[c], keys_.ring(c), keys_.directory, *clocks_.at(c));
    }
  }

  WireEnvelope Signed(Component from, Component to, std::string type, Json body = Json::object()) {
    WireEnvelope env;
    env.sender = from;
    env.recipient = to;
    env.type = std::move(type);
    env.body = std::move(body);
    env.nonce = NewNonce();
    env.timestamp = sim_.Now();
    SignEnvelope(env, keys_.ring(from));
    return env;
  }

  testing::TestKeys keys_;
  SimClock sim_{1'000'000};
  std::map<Component, std::unique_ptr<SkewedClock>> clocks_;
  std::map<Component, Echo> echo_;
  Bus bus_;
};

TEST_F(WireTest, SignedCallRoundTrips) {
  Json reply = bus_.TransportFor(Component::kRegistry).Call(Component::kBallotBox, "ping", {{"n", 3}});
  EXPECT_EQ(reply["from"], "ers");
  EXPECT_EQ(reply["body"]["n"], 3);
  EXPECT_EQ(bus_.delivered(), 1);
  EXPECT_EQ(bus_.rejected(), 0);
}

TEST_F(WireTest, RemoteErrorsKeepTheirCode) {
  EXPECT_EQ(CodeOf([&] { bus_.TransportFor(Component::kCommittee).Call(Component::kValidator, "fail", {}); }),
            ErrorCode::kIllegalState);
}

TEST_F(WireTest, BrokenSignatureIsRefused) {
  WireEnvelope env = Signed(Component::kRegistry, Component::kValidator, "ping", {{"x", 1}});
  env.body["x"] = 2;
  WireEnvelope reply = bus_.Deliver(env);
  EXPECT_EQ(CodeOf([&] { RethrowIfError(reply.body); }), ErrorCode::kVerificationFailed);
  EXPECT_EQ(echo_[Component::kValidator].calls, 0);
  EXPECT_EQ(bus_.rejected(), 1);

  WireEnvelope flipped = Signed(Component::kRegistry, Component::kValidator, "ping");
  flipped.signature.bytes[3] ^= 0x10;
  EXPECT_EQ(CodeOf([&] { RethrowIfError(bus_.Deliver(flipped).body); }),
            ErrorCode::kVerificationFailed);
}

TEST_F(WireTest, SenderCannotBeImpersonated) {
  // Signed by the registry but claiming to be the committee.
  WireEnvelope env = Signed(Component::kRegistry, Component::kBallotBox, "ping");
  env.sender = Component::kCommittee;
  EXPECT_NE(CodeOf([&] { RethrowIfError(bus_.Deliver(env).body); }), ErrorCode::kTransport);
  EXPECT_EQ(echo_[Component::kBallotBox].calls, 0);
}

TEST_F(WireTest, ReplayedEnvelopeIsRefused) {
  WireEnvelope env = Signed(Component::kRegistry, Component::kBallotBox, "ping");
  EXPECT_NO_THROW(RethrowIfError(bus_.Deliver(env).body));
  EXPECT_EQ(CodeOf([&] { RethrowIfError(bus_.Deliver(env).body); }), ErrorCode::kReplay);
  EXPECT_EQ(echo_[Component::kBallotBox].calls, 1);
}

TEST_F(WireTest, StaleAndFutureEnvelopesAreRefused) {
  WireEnvelope old = Signed(Component::kRegistry, Component::kBallotBox, "ping");
  sim_.Advance(kReplayWindow + 1);
  EXPECT_EQ(CodeOf([&] { RethrowIfError(bus_.Deliver(old).body); }), ErrorCode::kReplay);
  WireEnvelope ahead = Signed(Component::kRegistry, Component::kBallotBox, "ping");
  ahead.timestamp = sim_.Now() + kReplayWindow + 1;
  SignEnvelope(ahead, keys_.ring(Component::kRegistry));
  EXPECT_EQ(CodeOf([&] { RethrowIfError(bus_.Deliver(ahead).body); }), ErrorCode::kReplay);
}

TEST_F(WireTest, ReplyIsBoundToRequest) {
  WireEnvelope env = Signed(Component::kValidator, Component::kRegistry, "ping");
  WireEnvelope reply = bus_.Deliver(env);
  EXPECT_EQ(reply.reply_to, env.nonce);
  EXPECT_EQ(reply.sender, Component::kRegistry);
  EXPECT_EQ(reply.recipient, Component::kValidator);
  EXPECT_EQ(reply.type, "ping.reply");
  EXPECT_TRUE(crypto::Verify(keys_.directory.at(Component::kRegistry).communication,
                             reply.SignedBytes(), reply.signature));
}

TEST_F(WireTest, EnvelopeJsonRoundTrips) {
  WireEnvelope env = Signed(Component::kCommittee, Component::kRegistry, "counts", {{"a", {1, 2}}});
  WireEnvelope back = WireEnvelope::FromJson(env.ToJson());
  EXPECT_EQ(back.SignedBytes(), env.SignedBytes());
  EXPECT_EQ(back.signature, env.signature);
  EXPECT_FALSE(env.ToJson(false).contains("signature"));
  Json bad = env.ToJson();
  bad.erase("nonce");
  EXPECT_EQ(CodeOf([&] { WireEnvelope::FromJson(bad); }), ErrorCode::kMalformed);
}

TEST_F(WireTest, LockedKeysOnlyAnswerBootstrapMessages) {
  keys_.ring(Component::kValidator).Lock();
  auto& t = bus_.TransportFor(Component::kCommittee);
  EXPECT_NO_THROW(t.Call(Component::kValidator, "health", {}));
  EXPECT_EQ(CodeOf([&] { t.Call(Component::kValidator, "ping", {}); }), ErrorCode::kUnavailable);
  EXPECT_TRUE(IsBootstrapMessage("unlock"));
  EXPECT_FALSE(IsBootstrapMessage("register_token"));
}

TEST_F(WireTest, DropAndCrashFaultsFireOnTheirOccurrence) {
  bus_.faults().SetPlan({{"ping", -1, 1, FaultKind::kDrop, 0, {}},
                         {"ping", -1, 3, FaultKind::kCrash, 0, {}}});
  std::vector<Component> crashed;
  bus_.SetCrashHandler([&](Component c) { crashed.push_back(c); });
  auto& t = bus_.TransportFor(Component::kRegistry);
  EXPECT_NO_THROW(t.Call(Component::kBallotBox, "ping", {}));
  EXPECT_EQ(CodeOf([&] { t.Call(Component::kBallotBox, "ping", {}); }), ErrorCode::kUnavailable);
  EXPECT_NO_THROW(t.Call(Component::kBallotBox, "ping", {}));
  EXPECT_EQ(CodeOf([&] { t.Call(Component::kBallotBox, "ping", {}); }), ErrorCode::kUnavailable);
  EXPECT_EQ(crashed, std::vector<Component>{Component::kBallotBox});
  EXPECT_TRUE(bus_.IsDown(Component::kBallotBox));
  EXPECT_EQ(CodeOf([&] { t.Call(Component::kBallotBox, "other", {}); }), ErrorCode::kUnavailable);
  EXPECT_EQ(echo_[Component::kBallotBox].calls, 2);
  EXPECT_EQ(bus_.faults().fired().size(), 2u);
}

TEST_F(WireTest, DelayAdvancesTimeAndSkewBreaksFreshness) {
  bus_.faults().SetPlan({{"ping", -1, 0, FaultKind::kDelay, 700, {}},
                         {"ping", -1, 1, FaultKind::kClockSkew, kReplayWindow + kSecond,
                          Component::kValidator}});
  auto& t = bus_.TransportFor(Component::kRegistry);
  const Millis before = sim_.Now();
  EXPECT_NO_THROW(t.Call(Component::kValidator, "ping", {}));
  EXPECT_EQ(sim_.Now(), before + 700);
  EXPECT_EQ(CodeOf([&] { t.Call(Component::kValidator, "ping", {}); }), ErrorCode::kReplay);
}

TEST(FaultInjectorTest, StepFaultsCountOccurrencesFromStepZero) {
  FaultInjector f({{"confirm_vote", 4, 1, FaultKind::kCrash, 0, {}}});
  for (int step = 0; step < 10; ++step) EXPECT_FALSE(f.OnStep("confirm_vote", step));
  for (int step = 0; step < 4; ++step) EXPECT_FALSE(f.OnStep("confirm_vote", step));
  EXPECT_TRUE(f.OnStep("confirm_vote", 4));
  EXPECT_FALSE(f.OnStep("confirm_vote", 4));  // already used
  EXPECT_EQ(Fault::FromJson(f.fired()[0].ToJson()).ToJson(), f.fired()[0].ToJson());
}

class AttestationTest : public ::testing::Test {
 protected:
  crypto::KeyPair key_ = crypto::GenerateKeyPair(crypto::KeyPurpose::kCommunication, 8);
  SimClock clock_{5'000'000};
  AttestationVerifier verifier_{key_.public_key, clock_};

  StateAttestation Make(std::vector<std::string> approvals, int threshold = 2) {
    return Attest("Stopped", "tally", std::move(approvals), threshold, clock_.Now(),
                  key_.private_key);
  }
};

TEST_F(AttestationTest, AcceptsOnceWithDistinctApprovals) {
  auto a = Make({"o1", "o2"});
  EXPECT_NO_THROW(verifier_.Verify(a, "Stopped", "tally"));
  EXPECT_EQ(CodeOf([&] { verifier_.Verify(a, "Stopped", "tally"); }), ErrorCode::kPermissionDenied);
  auto round = StateAttestation::FromJson(Make({"o1", "o3"}).ToJson());
  EXPECT_NO_THROW(verifier_.Verify(round, "Stopped", "tally"));
}

TEST_F(AttestationTest, RefusesWeakOrAlteredAttestations) {
  EXPECT_EQ(CodeOf([&] { verifier_.Verify(Make({"o1"}, 1), "Stopped", "tally"); }),
            ErrorCode::kPermissionDenied);
  EXPECT_EQ(CodeOf([&] { verifier_.Verify(Make({"o1", "o1"}), "Stopped", "tally"); }),
            ErrorCode::kPermissionDenied);
  EXPECT_EQ(CodeOf([&] { verifier_.Verify(Make({"o1"}, 2), "Stopped", "tally"); }),
            ErrorCode::kPermissionDenied);
  auto a = Make({"o1", "o2"});
  a.approvals.push_back("o3");
  EXPECT_EQ(CodeOf([&] { verifier_.Verify(a, "Stopped", "tally"); }), ErrorCode::kPermissionDenied);
  EXPECT_EQ(CodeOf([&] { verifier_.Verify(Make({"o1", "o2"}), "Voting", "tally"); }),
            ErrorCode::kPermissionDenied);
  EXPECT_EQ(CodeOf([&] { verifier_.Verify(Make({"o1", "o2"}), "Stopped", "clear"); }),
            ErrorCode::kPermissionDenied);
  auto stale = Make({"o1", "o2"});
  clock_.Advance(kReplayWindow + 1);
  EXPECT_EQ(CodeOf([&] { verifier_.Verify(stale, "Stopped", "tally"); }),
            ErrorCode::kPermissionDenied);
}

}  // namespace
}  // namespace evote::wire
