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

#ifndef EVOTE_BALLOTBOX_BALLOT_H_
#define EVOTE_BALLOTBOX_BALLOT_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "evote/crypto/keys.h"

namespace evote::ballotbox {

// Reserved option value marking a contest as intentionally invalid.
inline constexpr std::string_view kInvalidMarker = "!invalid";

struct Contest {
  std::string contest_id;
  std::vector<std::string> options;
  int min_selections = 0;
  int max_selections = 1;
};

// Every contest implicitly allows the explicit invalid choice.
struct Ballot {
  std::string ballot_id;
  std::vector<Contest> contests;

  // Throws kInvalidArgument.
  void Check() const;
  const Contest* Find(std::string_view contest_id) const;

  nlohmann::json ToJson() const;
  static Ballot FromJson(const nlohmann::json& j);
};

struct ContestChoice {
  bool invalid = false;
  std::set<std::string> selections;

  bool operator==(const ContestChoice&) const = default;
};

// Per contest: a selection set or the invalid marker. The canonical form
// lists contests sorted by id, each as "id=opt,opt;" with options sorted,
// or "id=!invalid;".
struct VoteContent {
  std::map<std::string, ContestChoice> choices;

  std::string Canonical() const;
  static VoteContent ParseCanonical(std::string_view text);

  // {"<contest>": ["opt", ...] | "!invalid"}
  nlohmann::json ToJson() const;
  static VoteContent FromJson(const nlohmann::json& j);

  bool operator==(const VoteContent&) const = default;
};

// Checks `vote` against the ballot and fills absent contests with an empty
// selection. Throws kMalformed for unknown contests or options and for
// selection counts outside a contest's rules.
VoteContent Normalize(const Ballot& ballot, VoteContent vote);

struct ContestTally {
  std::string contest_id;
  std::map<std::string, std::int64_t> counts;
  std::int64_t invalid = 0;
  // Ballots counted as valid for this contest; valid + invalid = total.
  std::int64_t valid_ballots = 0;

  bool operator==(const ContestTally&) const = default;
};

struct TallyResult {
  std::string ballot_id;
  std::vector<ContestTally> contests;
  std::int64_t total_votes = 0;
  crypto::Signature signature;

  const ContestTally* Find(std::string_view contest_id) const;
  // Deterministic serialization covered by the signature.
  std::string CanonicalBytes() const;
  nlohmann::json ToJson() const;
  static TallyResult FromJson(const nlohmann::json& j);
};

TallyResult EmptyTally(const Ballot& ballot);
// Adds one canonical vote.
void CountVote(TallyResult& result, const VoteContent& vote);
bool VerifyTally(const TallyResult& result, const crypto::PublicKey& ballot_box);

}  // namespace evote::ballotbox

#endif  // EVOTE_BALLOTBOX_BALLOT_H_
