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

#ifndef EVOTE_HARNESS_SCENARIO_H_
#define EVOTE_HARNESS_SCENARIO_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "evote/ballotbox/ballot.h"
#include "evote/harness/deployment.h"
#include "evote/wire/faults.h"

namespace evote::harness {

// One entry of a voter timeline. Actions:
//   login            keyboard login (wrong_password for a failed attempt)
//   submit           send `vote` and receive the echo
//   confirm          cast the pending vote
//   cancel           give the token back
//   abandon          walk away; the session ends by expiry or stop
//   vote             login + submit + confirm
//   concurrent_vote  `ways` parallel logins with the same credential, then
//                    every issued token submits and confirms
//   stop             the committee authorizes the stop
//   advance          no voter action; time moves to `at_ms`
struct TimelineEvent {
  Millis at = 0;
  std::string action;
  int voter = -1;
  std::optional<nlohmann::json> vote;
  bool wrong_password = false;
  int ways = 1;

  nlohmann::json ToJson() const;
  static TimelineEvent FromJson(const nlohmann::json& j);
};

// Compact tally: contest -> option -> count, plus "invalid" per contest.
using CompactTally = std::map<std::string, std::map<std::string, std::int64_t>>;
nlohmann::json CompactTallyToJson(const CompactTally& t);
CompactTally CompactTallyFromJson(const nlohmann::json& j);
CompactTally Compact(const ballotbox::TallyResult& r);

struct ScenarioScript {
  std::string name;
  ElectionConfig config;
  std::vector<TimelineEvent> timeline;
  std::optional<CompactTally> expected_tally;
  wire::FaultPlan faults;

  // Throws kInvalidArgument on unknown actions, voter indices out of
  // range or negative times.
  void Check() const;
  nlohmann::json ToJson() const;
  static ScenarioScript FromJson(const nlohmann::json& j);
};

struct OracleResult {
  CompactTally tally;
  std::int64_t total = 0;
  // False when the fault plan contains faults the oracle does not model.
  bool applicable = true;
};

// Plaintext reference: replays the timeline against the protocol rules
// alone, without any cryptography or service code.
OracleResult PlaintextOracle(const ScenarioScript& script, const wire::FaultPlan& faults);

struct InvariantResult {
  bool ok = true;
  std::string detail;
};

struct ScenarioReport {
  std::string name;
  std::uint64_t seed = 0;
  CompactTally tally;
  std::int64_t total_votes = 0;
  bool tally_signature_ok = false;
  OracleResult oracle;
  bool tally_matches_oracle = false;
  std::optional<bool> tally_matches_expected;
  std::map<std::string, InvariantResult> invariants;
  std::map<std::string, std::int64_t> outcomes;
  std::map<std::string, std::int64_t> audit_histogram;
  std::vector<wire::Fault> faults_fired;
  std::string error;  // set when the run itself could not complete

  bool ok() const;
  nlohmann::json ToJson() const;
  // Byte-stable rendering.
  std::string Serialize() const;
};

struct ScenarioOptions {
  TransportMode mode = TransportMode::kBus;
  // Per-component audit lines without timestamps, in order.
  std::map<Component, std::vector<std::string>>* audit_trace = nullptr;
  // Called with the deployment after the tally, before it is torn down.
  std::function<void(Deployment&)> inspect;
};

// `faults` is added to the script's own plan.
ScenarioReport RunScenario(const ScenarioScript& script, const wire::FaultPlan& faults,
                           std::uint64_t seed, const ScenarioOptions& options = {});

struct RandomScenarioOptions {
  bool concurrent_logins = true;
  bool confirm_crash = false;
};

// Seeded random timeline over a small electorate.
ScenarioScript RandomScenario(std::uint64_t seed, const RandomScenarioOptions& options = {});

// The reference script: seven votes, four for a, two for b, one invalid.
ScenarioScript SevenVoteScript();

}  // namespace evote::harness

#endif  // EVOTE_HARNESS_SCENARIO_H_
