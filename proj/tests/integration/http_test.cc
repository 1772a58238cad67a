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

#include <gtest/gtest.h>
#include <httplib.h>

#include "evote/common/error.h"
#include "evote/harness/http_api.h"
#include "evote/harness/scenario.h"
#include "evote/wire/codec.h"
#include "evote/wire/http.h"

namespace evote::harness {
namespace {

using nlohmann::json;

TEST(HttpModeTest, AuditTraceMatchesBusMode) {
  std::map<Component, std::vector<std::string>> bus_trace, http_trace;
  ScenarioOptions bus_opts;
  bus_opts.audit_trace = &bus_trace;
  ScenarioOptions http_opts;
  http_opts.mode = TransportMode::kHttp;
  http_opts.audit_trace = &http_trace;

  ScenarioReport bus = RunScenario(SevenVoteScript(), {}, 11, bus_opts);
  ScenarioReport http = RunScenario(SevenVoteScript(), {}, 11, http_opts);
  ASSERT_TRUE(http.error.empty()) << http.error;
  EXPECT_TRUE(bus.ok());
  EXPECT_TRUE(http.ok()) << http.Serialize();
  EXPECT_EQ(http.tally, bus.tally);
  EXPECT_EQ(http_trace, bus_trace);
  EXPECT_FALSE(bus_trace.at(Component::kCommittee).empty());
}

TEST(HttpModeTest, RandomScenarioTracesMatch) {
  auto script = RandomScenario(3, {.concurrent_logins = false});
  std::map<Component, std::vector<std::string>> a, b;
  ScenarioOptions bus_opts{.audit_trace = &a};
  ScenarioOptions http_opts{.mode = TransportMode::kHttp, .audit_trace = &b};
  auto r1 = RunScenario(script, {}, 3, bus_opts);
  auto r2 = RunScenario(script, {}, 3, http_opts);
  EXPECT_TRUE(r2.ok()) << r2.Serialize();
  EXPECT_EQ(a, b);
  EXPECT_EQ(r1.tally, r2.tally);
}

class HttpEndpointTest : public ::testing::Test {
 protected:
  HttpEndpointTest() : d_(Config(), 21, TransportMode::kHttp) {
    d_.StartCommittee();
    d_.OpenElection();
  }
  static ElectionConfig Config() {
    ElectionConfig c;
    c.ballot = DefaultBallot();
    c.officers = {{"o1", "p1"}, {"o2", "p2"}, {"o3", "p3"}};
    c.voters = 3;
    return c;
  }
  Deployment d_;
};

TEST_F(HttpEndpointTest, LoginRequestCarriesOnlyCoordinates) {
  auto outcome = d_.Login(d_.credentials()[0]);
  ASSERT_EQ(outcome.kind, registry::AuthOutcome::Kind::kTokenIssued);
  auto& channel = dynamic_cast<HttpVoterChannel&>(d_.voters());
  const auto sent = channel.sent();
  ASSERT_EQ(sent.size(), 2u);
  EXPECT_EQ(sent[1].first, "/v1/voter/login");
  const json& body = sent[1].second;
  EXPECT_EQ(body.size(), 3u);
  for (const char* key : {"id_clicks", "password_clicks"}) {
    for (const auto& click : body.at(key)) {
      EXPECT_EQ(click.size(), 2u);
      EXPECT_TRUE(click.at("x").is_number_integer());
      EXPECT_TRUE(click.at("y").is_number_integer());
    }
  }
  const std::string text = body.dump();
  EXPECT_EQ(text.find(d_.credentials()[0].voter_id), std::string::npos);
  EXPECT_EQ(text.find(d_.credentials()[0].password), std::string::npos);
}

TEST_F(HttpEndpointTest, EchoAndConfirmOverHttp) {
  auto outcome = d_.Login(d_.credentials()[1]);
  auto token = Deployment::TokenOf(outcome);
  EXPECT_EQ(d_.voters().Submit(token, ballotbox::VoteContent::FromJson({{"c1", {"b"}}})),
            "c1=b;");
  EXPECT_EQ(d_.voters().Submit(token, ballotbox::VoteContent::FromJson({{"c1", {"c"}}})),
            "c1=c;");
  EXPECT_TRUE(d_.voters().Confirm(token).committed);
  EXPECT_EQ(d_.ballot_box().StoredCount(), 1);
  try {
    d_.voters().Confirm(token);
    FAIL() << "spent token accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

struct RawServer {
  explicit RawServer(Deployment& d)
      : endpoint(Component::kRegistry, d.registry(), d.keyring(Component::kRegistry),
                 d.directory(), d.clock(), d.registry().audit()) {
    InstallRegistryRoutes(endpoint, d.registry());
    port = endpoint.Bind("127.0.0.1", 0);
    endpoint.Start();
  }
  wire::HttpEndpoint endpoint;
  int port = 0;
};

TEST_F(HttpEndpointTest, MalformedJsonIsRejectedAndAudited) {
  RawServer s(d_);
  httplib::Client client("127.0.0.1", s.port);
  const auto before = d_.registry().audit().Events().size();
  auto res = client.Post("/v1/voter/login", "{not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(json::parse(res->body).at("error").at("code"), "malformed");
  auto events = d_.registry().audit().Events();
  ASSERT_EQ(events.size(), before + 1);
  EXPECT_EQ(events.back().category, AuditCategory::kMalfunction);
  EXPECT_EQ(events.back().detail, "event=malformed_request");

  res = client.Post(wire::kMessagePath, "[1,2", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
}

TEST_F(HttpEndpointTest, HealthReportsStatus) {
  RawServer s(d_);
  httplib::Client client("127.0.0.1", s.port);
  auto res = client.Get(wire::kHealthPath);
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  json h = json::parse(res->body);
  EXPECT_EQ(h.at("status"), "up");
  EXPECT_EQ(h.at("component"), "ers");
  EXPECT_TRUE(h.at("keys_unlocked").get<bool>());
}

TEST_F(HttpEndpointTest, UnsignedEnvelopeIsRefused) {
  RawServer s(d_);
  wire::WireEnvelope env;
  env.sender = Component::kCommittee;
  env.recipient = Component::kRegistry;
  env.type = "counts";
  env.nonce = wire::NewNonce();
  env.timestamp = d_.clock().Now();
  wire::SignEnvelope(env, d_.keyring(Component::kCommittee));
  env.body = {{"forged", true}};  // after signing
  httplib::Client client("127.0.0.1", s.port);
  httplib::Headers headers{{wire::kSignatureHeader, Base64Encode(env.signature.bytes)}};
  auto res = client.Post(wire::kMessagePath, headers, env.ToJson(false).dump(), "application/json");
  ASSERT_TRUE(res);
  json reply = json::parse(res->body);
  EXPECT_EQ(reply.at("body").at("error").at("code"), "verification_failed");
}

TEST_F(HttpEndpointTest, OfficerApiGatesResults) {
  wire::HttpEndpoint endpoint(Component::kCommittee, d_.committee(),
                              d_.keyring(Component::kCommittee), d_.directory(), d_.clock(),
                              d_.committee().audit());
  InstallCommitteeRoutes(endpoint, d_.committee());
  const int port = endpoint.Bind("127.0.0.1", 0);
  endpoint.Start();
  httplib::Client client("127.0.0.1", port);

  auto login = client.Post("/v1/officer/login", json{{"officer_id", "o2"}, {"password", "p2"}}.dump(),
                           "application/json");
  ASSERT_TRUE(login);
  ASSERT_EQ(login->status, 200);
  httplib::Headers session{{wire::kSessionHeader, json::parse(login->body).at("session_id")}};

  auto result = client.Get("/v1/officer/result", session);
  ASSERT_TRUE(result);
  EXPECT_EQ(result->status, 409);

  auto state = client.Get("/v1/officer/state", session);
  ASSERT_TRUE(state);
  json st = json::parse(state->body);
  EXPECT_EQ(st.at("state"), "Voting");
  EXPECT_EQ(st.at("remaining_approvals").at("stop"), 2);

  auto auth = client.Post("/v1/officer/authorize", session, json{{"action", "stop"}}.dump(),
                          "application/json");
  ASSERT_TRUE(auth);
  EXPECT_EQ(json::parse(auth->body).at("remaining"), 1);
  auto again = client.Post("/v1/officer/authorize", session, json{{"action", "stop"}}.dump(),
                           "application/json");
  ASSERT_TRUE(again);
  EXPECT_EQ(again->status, 409);

  auto anonymous = client.Get("/v1/officer/state");
  ASSERT_TRUE(anonymous);
  EXPECT_EQ(anonymous->status, 403);
  endpoint.Stop();
}

}  // namespace
}  // namespace evote::harness
