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

#ifndef EVOTE_HARNESS_HTTP_API_H_
#define EVOTE_HARNESS_HTTP_API_H_

#include <mutex>
#include <string>

#include "evote/ballotbox/ballotbox_service.h"
#include "evote/committee/committee_service.h"
#include "evote/harness/deployment.h"
#include "evote/registry/registry_service.h"
#include "evote/wire/http.h"

namespace evote::harness {

// Browser-facing JSON routes. Paths and field names are listed in
// docs/wire_schema.md.
void InstallRegistryRoutes(wire::HttpEndpoint& endpoint, registry::RegistryService& registry);
void InstallBallotBoxRoutes(wire::HttpEndpoint& endpoint, ballotbox::BallotBoxService& box);
void InstallCommitteeRoutes(wire::HttpEndpoint& endpoint, committee::CommitteeService& committee);

wire::Json TokenToJson(const ballotbox::VoterToken& token);
ballotbox::VoterToken TokenFromJson(const wire::Json& j);

// Voter channel over the JSON routes, as a browser would use them.
class HttpVoterChannel final : public VoterChannel {
 public:
  HttpVoterChannel(std::string registry_address, std::string ballot_box_address);

  registry::LoginSession BeginLogin() override;
  registry::AuthOutcome Login(const std::string& session_id,
                              const std::vector<registry::Click>& id_clicks,
                              const std::vector<registry::Click>& password_clicks) override;
  std::string Submit(const ballotbox::VoterToken& token,
                     const ballotbox::VoteContent& vote) override;
  ballotbox::CastReceipt Confirm(const ballotbox::VoterToken& token) override;
  void Cancel(const ballotbox::VoterToken& token) override;

  // Raw request log: every body this client posted, in order.
  std::vector<std::pair<std::string, wire::Json>> sent() const;

 private:
  wire::Json PostJson(const std::string& address, const std::string& path, const wire::Json& body);

  std::string registry_;
  std::string ballot_box_;
  mutable std::mutex mu_;
  std::vector<std::pair<std::string, wire::Json>> sent_;
};

// Parses and rethrows an error body as evote::Error.
wire::Json ParseHttpReply(int status, const std::string& body);

}  // namespace evote::harness

#endif  // EVOTE_HARNESS_HTTP_API_H_
