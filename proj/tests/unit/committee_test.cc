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

#include "evote/committee/committee_service.h"

#include <gtest/gtest.h>

#include <bit>
#include <fstream>
#include <thread>

#include "evote/committee/archive.h"
#include "evote/common/binary_io.h"
#include "evote/common/error.h"
#include "evote/harness/deployment.h"

namespace evote::committee {
namespace {

using harness::Deployment;
using harness::ElectionConfig;

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kTransport;  // no error
}

ElectionConfig Config(int s, int n) {
  ElectionConfig c;
  c.ballot = harness::DefaultBallot();
  c.threshold = s;
  for (int i = 1; i <= n; ++i) c.officers.push_back({"o" + std::to_string(i), "pw-" + std::to_string(i)});
  c.block_size = 4;
  c.grace_period = 2 * kSecond;
  c.voters = 4;
  return c;
}

void CastVote(Deployment& d, std::size_t voter, const std::string& option) {
  auto t = Deployment::TokenOf(d.Login(d.credentials().at(voter)));
  d.voters().Submit(t, ballotbox::VoteContent::FromJson({{"c1", {option}}}));
  ASSERT_TRUE(d.voters().Confirm(t).committed);
}

int CountDetail(const std::vector<AuditEvent>& events, std::string_view needle) {
  int n = 0;
  for (const auto& e : events) n += e.detail.find(needle) != std::string::npos;
  return n;
}

// Every approval subset of every officer set: the action fires exactly when
// S distinct officers approved, and never earlier.
TEST(CommitteeModelTest, ThresholdHoldsForEverySubset) {
  for (int s : {2, 3}) {
    for (int n : {3, 5}) {
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        Deployment d(Config(s, n), 5);
        d.StartCommittee();
        auto& cs = d.committee();
        cs.FinishSetup(d.session(0));
        int given = 0;
        for (int i = 0; i < n; ++i) {
          if (!(mask & (1u << i))) continue;
          if (given == s) {
            EXPECT_EQ(CodeOf([&] { cs.Authorize(d.session(i), Action::kStart); }),
                      ErrorCode::kIllegalState);
            continue;
          }
          auto r = cs.Authorize(d.session(i), Action::kStart);
          ++given;
          EXPECT_EQ(r.fired, given == s);
          EXPECT_EQ(r.remaining, s - given);
        }
        const bool enough = std::popcount(mask) >= s;
        EXPECT_EQ(cs.state() == ElectionState::kAwaitingPassphrases, enough)
            << "S=" << s << " N=" << n << " mask=" << mask;
        if (!enough) EXPECT_EQ(cs.state(), ElectionState::kAwaitingStartAuthorization);
      }
    }
  }
}

class CommitteeTest : public ::testing::Test {
 protected:
  explicit CommitteeTest(ElectionConfig config = Config(2, 3)) : d_(std::move(config), 11) {
    d_.StartCommittee();
  }
  CommitteeService& cs() { return d_.committee(); }
  std::vector<AuditEvent> Audit(std::optional<AuditCategory> cat = std::nullopt) {
    return cs().GetAuditRecords(d_.session(0), Component::kCommittee, cat);
  }

  Deployment d_;
};

TEST_F(CommitteeTest, RepeatedApprovalDoesNotCount) {
  cs().FinishSetup(d_.session(0));
  EXPECT_EQ(cs().Authorize(d_.session(0), Action::kStart).remaining, 1);
  EXPECT_EQ(CodeOf([&] { cs().Authorize(d_.session(0), Action::kStart); }),
            ErrorCode::kAlreadyExists);
  // A second session of the same officer is still the same officer.
  auto again = cs().Login("o1", "pw-1");
  EXPECT_EQ(CodeOf([&] { cs().Authorize(again.session_id, Action::kStart); }),
            ErrorCode::kAlreadyExists);
  EXPECT_EQ(cs().RemainingApprovals(Action::kStart), 1);
  EXPECT_EQ(cs().state(), ElectionState::kAwaitingStartAuthorization);
  EXPECT_EQ(CountDetail(Audit(AuditCategory::kOfficerAuth),
                        "event=authorization officer=o1 action=start remaining=1"),
            1);
}

TEST_F(CommitteeTest, OfficerLoginIsChecked) {
  EXPECT_EQ(CodeOf([&] { cs().Login("o1", "wrong"); }), ErrorCode::kPermissionDenied);
  EXPECT_EQ(CodeOf([&] { cs().Login("nobody", "pw-1"); }), ErrorCode::kPermissionDenied);
  EXPECT_EQ(CountDetail(Audit(AuditCategory::kOfficerAuth), "event=login outcome=failed"), 2);
  EXPECT_EQ(CodeOf([&] { cs().FinishSetup("no-such-session"); }), ErrorCode::kPermissionDenied);
  cs().Logout(d_.session(1));
  EXPECT_EQ(CodeOf([&] { cs().SessionOfficer(d_.session(1)); }), ErrorCode::kPermissionDenied);
  d_.Advance(31 * kMinute);
  EXPECT_EQ(CodeOf([&] { cs().SessionOfficer(d_.session(0)); }), ErrorCode::kPermissionDenied);
}

TEST_F(CommitteeTest, LifecycleNeverReentersVoting) {
  d_.OpenElection();
  EXPECT_EQ(cs().state(), ElectionState::kVoting);
  EXPECT_EQ(CodeOf([&] { cs().Authorize(d_.session(0), Action::kStart); }),
            ErrorCode::kIllegalState);
  EXPECT_EQ(CodeOf([&] { cs().FinishSetup(d_.session(0)); }), ErrorCode::kIllegalState);
  d_.AuthorizeStop();
  EXPECT_EQ(cs().state(), ElectionState::kGracePeriod);
  for (Action a : {Action::kStart, Action::kStop}) {
    EXPECT_EQ(CodeOf([&] { cs().Authorize(d_.session(2), a); }), ErrorCode::kIllegalState);
  }
  d_.FinishStop();
  EXPECT_EQ(cs().state(), ElectionState::kStopped);
  EXPECT_EQ(CodeOf([&] { cs().Authorize(d_.session(0), Action::kStart); }),
            ErrorCode::kIllegalState);
  d_.Tally();
  EXPECT_EQ(cs().state(), ElectionState::kTallied);
  for (Action a : {Action::kStart, Action::kStop, Action::kTally}) {
    EXPECT_EQ(CodeOf([&] { cs().Authorize(d_.session(0), a); }), ErrorCode::kIllegalState);
  }
}

TEST_F(CommitteeTest, TallyRefusedBeforeStop) {
  d_.OpenElection();
  CastVote(d_, 0, "a");
  EXPECT_EQ(CodeOf([&] { cs().Authorize(d_.session(0), Action::kTally); }),
            ErrorCode::kIllegalState);
  EXPECT_EQ(CodeOf([&] { cs().RunTally(); }), ErrorCode::kIllegalState);
  d_.AuthorizeStop();
  EXPECT_EQ(CodeOf([&] { cs().Authorize(d_.session(0), Action::kTally); }),
            ErrorCode::kIllegalState);
  EXPECT_EQ(CodeOf([&] { cs().RunTally(); }), ErrorCode::kIllegalState);
  EXPECT_FALSE(cs().result().has_value());
}

TEST_F(CommitteeTest, StopFollowsGracePeriod) {
  d_.OpenElection();
  auto held = Deployment::TokenOf(d_.Login(d_.credentials()[0]));
  auto pending = Deployment::TokenOf(d_.Login(d_.credentials()[2]));
  d_.voters().Submit(pending, ballotbox::VoteContent::FromJson({{"c1", {"a"}}}));
  const Millis t0 = d_.clock().Now();
  d_.AuthorizeStop();
  ASSERT_EQ(cs().grace_deadline(), t0 + 2 * kSecond);
  // No new authentications during the grace period.
  EXPECT_EQ(CodeOf([&] { d_.Login(d_.credentials()[1]); }), ErrorCode::kUnavailable);
  d_.Advance(1999);
  EXPECT_EQ(cs().state(), ElectionState::kGracePeriod);
  d_.voters().Submit(held, ballotbox::VoteContent::FromJson({{"c1", {"b"}}}));
  EXPECT_TRUE(d_.voters().Confirm(held).committed);
  d_.Advance(1);
  EXPECT_EQ(cs().state(), ElectionState::kStopped);
  EXPECT_FALSE(d_.ballot_box().accepting());
  EXPECT_EQ(CodeOf([&] { d_.voters().Confirm(pending); }), ErrorCode::kNotFound);
  EXPECT_EQ(d_.ballot_box().StoredCount(), 1);
  EXPECT_EQ(d_.registry().counts().session_active, 0);
  EXPECT_EQ(d_.Tally().total_votes, 1);
}

TEST_F(CommitteeTest, ClearVotesAllowsAFreshElection) {
  d_.OpenElection();
  CastVote(d_, 0, "a");
  d_.AuthorizeStop();
  d_.FinishStop();
  cs().Authorize(d_.session(0), Action::kClear);
  EXPECT_TRUE(cs().Authorize(d_.session(2), Action::kClear).fired);
  EXPECT_EQ(cs().state(), ElectionState::kSetup);
  EXPECT_EQ(d_.ballot_box().StoredCount(), 0);
  EXPECT_EQ(CountDetail(Audit(AuditCategory::kMalfunction), "component_call_failed"), 0);
  d_.OpenElection();
  CastVote(d_, 0, "b");
  d_.AuthorizeStop();
  d_.FinishStop();
  auto tally = d_.Tally();
  EXPECT_EQ(tally.total_votes, 1);
}

class LowTurnoutTest : public CommitteeTest {
 protected:
  static ElectionConfig WithThreshold() {
    ElectionConfig c = Config(2, 3);
    c.low_turnout_threshold = 3;
    return c;
  }
  LowTurnoutTest() : CommitteeTest(WithThreshold()) {}
};

TEST_F(LowTurnoutTest, TallyWaitsForAcknowledgement) {
  d_.OpenElection();
  CastVote(d_, 0, "a");
  d_.AuthorizeStop();
  d_.FinishStop();
  EXPECT_EQ(CodeOf([&] { cs().AcknowledgeLowTurnout(d_.session(0)); }), ErrorCode::kIllegalState);
  cs().Authorize(d_.session(0), Action::kTally);
  cs().Authorize(d_.session(1), Action::kTally);
  EXPECT_TRUE(cs().low_turnout_hold());
  EXPECT_FALSE(cs().result().has_value());
  EXPECT_EQ(cs().state(), ElectionState::kStopped);
  cs().AcknowledgeLowTurnout(d_.session(2));
  ASSERT_TRUE(cs().result().has_value());
  EXPECT_EQ(cs().result()->total_votes, 1);
  EXPECT_EQ(cs().state(), ElectionState::kTallied);
}

TEST_F(CommitteeTest, SelfTestsAreMutuallyExclusive) {
  d_.OpenElection();
  ErrorCode second = ErrorCode::kTransport;
  cs().SetSelfTestProbe([&] {
    std::thread t([&] { second = CodeOf([&] { cs().RunSelfTest("o2"); }); });
    t.join();
  });
  SelfTestReport r = cs().RunSelfTestAsOfficer(d_.session(0));
  EXPECT_EQ(second, ErrorCode::kBusy);
  EXPECT_TRUE(r.passed()) << r.ToJson().dump();
  EXPECT_EQ(r.started_by, "o1");
  EXPECT_EQ(r.checks.size(), 5u);
  EXPECT_EQ(CountDetail(Audit(AuditCategory::kSelftestResult), "event=selftest"), 1);
}

class ScheduledSelfTest : public CommitteeTest {
 protected:
  static ElectionConfig Scheduled() {
    ElectionConfig c = Config(2, 3);
    c.selftest_interval = kMinute;
    return c;
  }
  ScheduledSelfTest() : CommitteeTest(Scheduled()) {}
};

TEST_F(ScheduledSelfTest, RunsOnSchedule) {
  d_.OpenElection();
  EXPECT_EQ(CountDetail(Audit(AuditCategory::kSelftestResult), "trigger=scheduler"), 0);
  for (int i = 0; i < 4; ++i) d_.Advance(kMinute);
  auto runs = Audit(AuditCategory::kSelftestResult);
  EXPECT_EQ(CountDetail(runs, "trigger=scheduler outcome=pass"), 4);
  d_.Advance(30 * kSecond);
  EXPECT_EQ(CountDetail(Audit(AuditCategory::kSelftestResult), "trigger=scheduler"), 4);
}

TEST_F(CommitteeTest, SelfTestFlagsDownComponent) {
  d_.OpenElection();
  d_.bus().SetDown(Component::kValidator, true);
  SelfTestReport r = cs().RunSelfTest("o1");
  EXPECT_FALSE(r.passed());
  for (const auto& c : r.checks) {
    if (c.name == "network" || c.name == "hardware") {
      EXPECT_FALSE(c.passed);
      EXPECT_EQ(c.detail, "vs");
    }
  }
}

// Member offsets, read independently of the archive reader.
std::vector<std::pair<std::string, std::size_t>> MemberOffsets(const Bytes& archive) {
  std::vector<std::pair<std::string, std::size_t>> out;
  BinaryReader r(archive);
  r.Raw(4);
  const std::uint32_t n = r.U32();
  for (std::uint32_t i = 0; i < n; ++i) {
    std::string name = r.FieldString();
    const std::size_t at = r.position() + 4;
    Bytes data = r.Field();
    if (!data.empty()) out.emplace_back(name, at + data.size() / 2);
  }
  r.FieldString();
  // Archive signature, then manifest signature.
  out.emplace_back(std::string(kSignatureMember), r.position() + 4 + 10);
  out.emplace_back(std::string(kSignatureMember), r.position() + 4 + 64 + 10);
  return out;
}

class ArchiveTest : public CommitteeTest {
 protected:
  Bytes RunElection() {
    d_.OpenElection();
    CastVote(d_, 0, "a");
    CastVote(d_, 1, "c");
    d_.AuthorizeStop();
    d_.FinishStop();
    d_.Tally();
    return d_.BuildArchive();
  }
  const crypto::PublicKey& signer() {
    return d_.directory().at(Component::kCommittee).communication;
  }
};

TEST_F(ArchiveTest, ArchiveVerifiesAndListsMembers) {
  Bytes archive = RunElection();
  EXPECT_EQ(cs().state(), ElectionState::kArchived);
  ArchiveReport r = VerifyArchive(archive, signer());
  ASSERT_TRUE(r.ok) << r.issues.front();
  std::vector<std::string> names;
  for (const auto& m : r.members) names.push_back(m.name);
  EXPECT_EQ(names, (std::vector<std::string>{
                       "tally_result.json", "electoral_register.txt", "software_report.json",
                       "db/ers.img", "db/vs.img", "db/bbs.img", "db/committee.img", "audit/ers.log",
                       "audit/vs.log", "audit/bbs.log", "audit/committee.log", "manifest.json"}));
  auto tally = ballotbox::TallyResult::FromJson(nlohmann::json::parse(ToString(r.members[0].data)));
  EXPECT_EQ(tally.total_votes, 2);
  EXPECT_TRUE(ballotbox::VerifyTally(tally, d_.directory().at(Component::kBallotBox).communication));
}

TEST_F(ArchiveTest, EverySingleMemberMutationIsNamed) {
  Bytes archive = RunElection();
  for (const auto& [name, offset] : MemberOffsets(archive)) {
    Bytes bad = archive;
    bad[offset] ^= 0x01;
    ArchiveReport r = VerifyArchive(bad, signer());
    EXPECT_FALSE(r.ok) << name;
    EXPECT_EQ(r.broken_member, name);
  }
  EXPECT_FALSE(VerifyArchive(ByteView(archive).first(archive.size() - 1), signer()).ok);
  auto other = crypto::GenerateKeyPair(crypto::KeyPurpose::kCommunication, 3);
  EXPECT_FALSE(VerifyArchive(archive, other.public_key).ok);
}

TEST_F(ArchiveTest, SoftwareBaselineDetectsOneByteChange) {
  const auto dir = std::filesystem::temp_directory_path() / ("evote-baseline-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  std::map<std::string, std::filesystem::path> artifacts;
  for (const char* c : {"ers", "vs", "bbs", "committee"}) {
    artifacts[c] = dir / (std::string(c) + ".bin");
    std::ofstream(artifacts[c], std::ios::binary) << "artifact of " << c << std::string(100, 'x');
  }
  cs().RecordSoftwareBaseline(artifacts);
  auto baseline = *cs().baseline();
  const auto& key = signer();
  EXPECT_TRUE(VerifyBaseline(baseline, key).ok());
  {
    std::fstream f(artifacts["vs"], std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(20);
    f.put('y');
  }
  BaselineReport report = VerifyBaseline(baseline, key);
  EXPECT_FALSE(report.ok());
  EXPECT_EQ(report.Mismatches(), std::vector<std::string>{"vs"});
  EXPECT_EQ(report.status.at("ers"), "ok");

  SoftwareBaseline forged = baseline;
  forged.artifacts["vs"].digest = crypto::HashBytes(AsBytes("other"));
  EXPECT_FALSE(VerifyBaseline(forged, key).signature_ok);
  EXPECT_EQ(CodeOf([&] { cs().SetSoftwareBaseline(forged); }), ErrorCode::kVerificationFailed);

  Bytes archive = RunElection();
  EXPECT_EQ(CountDetail(Audit(AuditCategory::kMalfunction),
                        "event=software_signature_mismatch artifact=vs"),
            1);
  auto members = VerifyArchive(archive, key).members;
  auto software = nlohmann::json::parse(ToString(members[2].data));
  EXPECT_EQ(software["verification"]["artifacts"]["vs"], "mismatch");
  std::filesystem::remove_all(dir);
}

TEST_F(CommitteeTest, MonitorReportsCountsWithoutAnomaly) {
  d_.OpenElection();
  CastVote(d_, 0, "a");
  auto open = Deployment::TokenOf(d_.Login(d_.credentials()[1]));
  (void)open;
  MonitoringSnapshot m = cs().Monitor();
  EXPECT_EQ(m.votes_stored, 1);
  EXPECT_EQ(m.voters_voted, 1);
  EXPECT_EQ(m.voters_session_active, 1);
  EXPECT_FALSE(m.anomaly);
  for (const auto& [c, h] : m.health) EXPECT_EQ(h, "up") << ComponentName(c);
}

}  // namespace
}  // namespace evote::committee
