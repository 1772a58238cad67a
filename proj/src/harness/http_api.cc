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

#include "evote/harness/http_api.h"

#include <httplib.h>

#include "evote/common/error.h"
#include "evote/wire/codec.h"

namespace evote::harness {
namespace {

using wire::Json;

std::vector<registry::Click> ClicksFromJson(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kMalformed, "clicks must be an array");
  std::vector<registry::Click> out;
  for (const auto& c : j) {
    if (!c.is_object() || c.size() != 2) throw Error(ErrorCode::kMalformed, "click is {x, y}");
    out.push_back({c.at("x").get<int>(), c.at("y").get<int>()});
  }
  return out;
}

Json ClicksToJson(const std::vector<registry::Click>& clicks) {
  Json out = Json::array();
  for (const auto& c : clicks) out.push_back({{"x", c.x}, {"y", c.y}});
  return out;
}

Json OutcomeToJson(const registry::AuthOutcome& o) {
  using Kind = registry::AuthOutcome::Kind;
  switch (o.kind) {
    case Kind::kTokenIssued:
      return {{"outcome", "token_issued"},
              {"token", TokenToJson({o.token, o.token_signature})}};
    case Kind::kAlreadyVoted:
      return {{"outcome", "already_voted"},
              {"notice", registry::AuthOutcome::kAlreadyVotedNotice}};
    case Kind::kRejected:
      break;
  }
  return {{"outcome", "rejected"}, {"notice", registry::AuthOutcome::kRejectedNotice}};
}

std::pair<std::string, int> SplitAddress(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorCode::kInvalidArgument, "address is host:port");
  return {address.substr(0, colon), std::stoi(address.substr(colon + 1))};
}

}  // namespace

Json TokenToJson(const ballotbox::VoterToken& token) {
  return {{"value", wire::EncodeBytes(token.value.view())},
          {"signature", wire::EncodeSignature(token.signature)}};
}

ballotbox::VoterToken TokenFromJson(const Json& j) {
  ballotbox::VoterToken t;
  Bytes value = wire::DecodeBytes(wire::Field(j, "value"));
  t.value = SecureBytes(value);
  t.signature = wire::DecodeSignature(wire::Field(j, "signature"));
  return t;
}

void InstallRegistryRoutes(wire::HttpEndpoint& endpoint, registry::RegistryService& registry) {
  endpoint.Post("/v1/voter/login-session", [&](const httplib::Request&, const Json&) {
    registry::LoginSession s = registry.BeginLogin();
    return Json{{"session_id", s.session_id},
                {"keyboard", s.keyboard_layout.ToJson()},
                {"expires_at", s.expires_at}};
  });
  endpoint.Post("/v1/voter/login", [&](const httplib::Request&, const Json& body) {
    return OutcomeToJson(registry.Login(wire::StringField(body, "session_id"),
                                        ClicksFromJson(wire::Field(body, "id_clicks")),
                                        ClicksFromJson(wire::Field(body, "password_clicks"))));
  });
}

void InstallBallotBoxRoutes(wire::HttpEndpoint& endpoint, ballotbox::BallotBoxService& box) {
  endpoint.Post("/v1/voter/ballot", [&](const httplib::Request&, const Json& body) {
    return box.FetchBallot(TokenFromJson(wire::Field(body, "token"))).ToJson();
  });
  endpoint.Post("/v1/voter/submit", [&](const httplib::Request&, const Json& body) {
    std::string echo = box.SubmitVote(TokenFromJson(wire::Field(body, "token")),
                                      ballotbox::VoteContent::FromJson(wire::Field(body, "vote")));
    return Json{{"echo", echo}, {"vote", ballotbox::VoteContent::ParseCanonical(echo).ToJson()}};
  });
  endpoint.Post("/v1/voter/confirm", [&](const httplib::Request&, const Json& body) {
    auto receipt = box.ConfirmVote(TokenFromJson(wire::Field(body, "token")));
    return Json{{"committed", receipt.committed}};
  });
  endpoint.Post("/v1/voter/cancel", [&](const httplib::Request&, const Json& body) {
    box.Cancel(TokenFromJson(wire::Field(body, "token")));
    return Json{{"cancelled", true}};
  });
}

void InstallCommitteeRoutes(wire::HttpEndpoint& endpoint, committee::CommitteeService& committee) {
  using committee::Action;
  auto session = [](const httplib::Request& req) {
    return req.get_header_value(wire::kSessionHeader);
  };
  endpoint.Post("/v1/officer/login", [&](const httplib::Request&, const Json& body) {
    auto s = committee.Login(wire::StringField(body, "officer_id"),
                             wire::StringField(body, "password"));
    return Json{{"session_id", s.session_id}, {"officer_id", s.officer_id},
                {"expires_at", s.expires_at}};
  });
  endpoint.Post("/v1/officer/logout", [&, session](const httplib::Request& req, const Json&) {
    committee.Logout(session(req));
    return Json::object();
  });
  endpoint.Get("/v1/officer/state", [&, session](const httplib::Request& req, const Json&) {
    committee.SessionOfficer(session(req));
    Json remaining = Json::object();
    for (Action a : {Action::kStart, Action::kStop, Action::kTally, Action::kClear}) {
      remaining[std::string(committee::ActionName(a))] = committee.RemainingApprovals(a);
    }
    Json slots = Json::array();
    for (const auto& s : committee.slots()) {
      slots.push_back({{"component", ComponentName(s.component)},
                       {"slot", crypto::KeyPurposeName(s.which)},
                       {"entered", s.entered}});
    }
    auto deadline = committee.grace_deadline();
    return Json{{"state", committee::ElectionStateName(committee.state())},
                {"remaining_approvals", remaining},
                {"slots", slots},
                {"grace_deadline", deadline ? Json(*deadline) : Json(nullptr)},
                {"low_turnout_hold", committee.low_turnout_hold()},
                {"stop_halted", committee.stop_sequence_halted()}};
  });
  endpoint.Post("/v1/officer/finish-setup", [&, session](const httplib::Request& req, const Json&) {
    committee.FinishSetup(session(req));
    return Json{{"state", committee::ElectionStateName(committee.state())}};
  });
  endpoint.Post("/v1/officer/authorize", [&, session](const httplib::Request& req,
                                                      const Json& body) {
    auto r = committee.Authorize(session(req),
                                 committee::ActionFromName(wire::StringField(body, "action")));
    return Json{{"remaining", r.remaining}, {"fired", r.fired},
                {"state", committee::ElectionStateName(committee.state())}};
  });
  endpoint.Post("/v1/officer/passphrase", [&, session](const httplib::Request& req,
                                                       const Json& body) {
    int remaining = committee.EnterPassphrase(
        session(req), ComponentFromName(wire::StringField(body, "component")),
        crypto::KeyPurposeFromName(wire::StringField(body, "slot")),
        wire::StringField(body, "passphrase"));
    return Json{{"remaining", remaining}};
  });
  endpoint.Post("/v1/officer/acknowledge-low-turnout",
                [&, session](const httplib::Request& req, const Json&) {
                  committee.AcknowledgeLowTurnout(session(req));
                  return Json{{"state", committee::ElectionStateName(committee.state())}};
                });
  endpoint.Post("/v1/officer/retry-stop", [&, session](const httplib::Request& req, const Json&) {
    committee.RetryStopSequence(session(req));
    return Json{{"stop_halted", committee.stop_sequence_halted()}};
  });
  endpoint.Get("/v1/officer/monitor", [&, session](const httplib::Request& req, const Json&) {
    committee.SessionOfficer(session(req));
    return committee.Monitor().ToJson();
  });
  endpoint.Post("/v1/officer/selftest", [&, session](const httplib::Request& req, const Json&) {
    return committee.RunSelfTestAsOfficer(session(req)).ToJson();
  });
  endpoint.Get("/v1/officer/audit", [&, session](const httplib::Request& req, const Json&) {
    std::optional<Component> component;
    std::optional<AuditCategory> category;
    if (req.has_param("component")) component = ComponentFromName(req.get_param_value("component"));
    if (req.has_param("category")) {
      category = AuditCategoryFromName(req.get_param_value("category"));
    }
    Json events = Json::array();
    for (const auto& e : committee.GetAuditRecords(session(req), component, category)) {
      events.push_back({{"timestamp", e.timestamp},
                        {"component", ComponentName(e.component)},
                        {"category", AuditCategoryName(e.category)},
                        {"detail", e.detail}});
    }
    return Json{{"events", events}};
  });
  endpoint.Get("/v1/officer/result", [&, session](const httplib::Request& req, const Json&) {
    committee.SessionOfficer(session(req));
    auto result = committee.result();
    if (!result) throw Error(ErrorCode::kIllegalState, "no result before the tally");
    return result->ToJson();
  });
  endpoint.Post("/v1/officer/archive", [&, session](const httplib::Request& req, const Json&) {
    return Json{{"archive", wire::EncodeBytes(committee.BuildArchive(session(req)))}};
  });
}

Json ParseHttpReply(int status, const std::string& body) {
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kTransport, "non-JSON reply");
  wire::RethrowIfError(j);
  if (status != 200) throw Error(ErrorCode::kTransport, "HTTP " + std::to_string(status));
  return j;
}

HttpVoterChannel::HttpVoterChannel(std::string registry_address, std::string ballot_box_address)
    : registry_(std::move(registry_address)), ballot_box_(std::move(ballot_box_address)) {}

Json HttpVoterChannel::PostJson(const std::string& address, const std::string& path,
                                const Json& body) {
  {
    std::lock_guard lock(mu_);
    sent_.emplace_back(path, body);
  }
  auto [host, port] = SplitAddress(address);
  httplib::Client client(host, port);
  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) throw Error(ErrorCode::kUnavailable, "server unreachable");
  return ParseHttpReply(res->status, res->body);
}

registry::LoginSession HttpVoterChannel::BeginLogin() {
  Json j = PostJson(registry_, "/v1/voter/login-session", Json::object());
  registry::LoginSession s;
  s.session_id = wire::StringField(j, "session_id");
  s.keyboard_layout = registry::KeyboardLayout::FromJson(wire::Field(j, "keyboard"));
  s.expires_at = wire::IntField(j, "expires_at");
  return s;
}

registry::AuthOutcome HttpVoterChannel::Login(const std::string& session_id,
                                              const std::vector<registry::Click>& id_clicks,
                                              const std::vector<registry::Click>& password_clicks) {
  Json j = PostJson(registry_, "/v1/voter/login",
                    {{"session_id", session_id},
                     {"id_clicks", ClicksToJson(id_clicks)},
                     {"password_clicks", ClicksToJson(password_clicks)}});
  registry::AuthOutcome o;
  const std::string outcome = wire::StringField(j, "outcome");
  if (outcome == "token_issued") {
    o.kind = registry::AuthOutcome::Kind::kTokenIssued;
    auto t = TokenFromJson(wire::Field(j, "token"));
    o.token = std::move(t.value);
    o.token_signature = t.signature;
  } else if (outcome == "already_voted") {
    o.kind = registry::AuthOutcome::Kind::kAlreadyVoted;
  }
  return o;
}

std::string HttpVoterChannel::Submit(const ballotbox::VoterToken& token,
                                     const ballotbox::VoteContent& vote) {
  Json j = PostJson(ballot_box_, "/v1/voter/submit",
                    {{"token", TokenToJson(token)}, {"vote", vote.ToJson()}});
  return wire::StringField(j, "echo");
}

ballotbox::CastReceipt HttpVoterChannel::Confirm(const ballotbox::VoterToken& token) {
  Json j = PostJson(ballot_box_, "/v1/voter/confirm", {{"token", TokenToJson(token)}});
  return {j.value("committed", false)};
}

void HttpVoterChannel::Cancel(const ballotbox::VoterToken& token) {
  PostJson(ballot_box_, "/v1/voter/cancel", {{"token", TokenToJson(token)}});
}

std::vector<std::pair<std::string, Json>> HttpVoterChannel::sent() const {
  std::lock_guard lock(mu_);
  return sent_;
}

}  // namespace evote::harness
