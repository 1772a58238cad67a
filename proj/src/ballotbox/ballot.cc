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

#include <algorithm>

#include "evote/common/error.h"
#include "evote/wire/codec.h"

namespace evote::ballotbox {
namespace {

using nlohmann::json;

bool IsIdentifier(std::string_view s) {
  if (s.empty() || s.size() > 64) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-' || c == '.';
  });
}

}  // namespace

void Ballot::Check() const {
  if (!IsIdentifier(ballot_id)) throw Error(ErrorCode::kInvalidArgument, "bad ballot id");
  if (contests.empty()) throw Error(ErrorCode::kInvalidArgument, "ballot has no contests");
  std::set<std::string> ids;
  for (const auto& c : contests) {
    if (!IsIdentifier(c.contest_id) || !ids.insert(c.contest_id).second) {
      throw Error(ErrorCode::kInvalidArgument, "bad or duplicate contest id");
    }
    if (c.options.empty()) throw Error(ErrorCode::kInvalidArgument, "contest has no options");
    std::set<std::string> opts;
    for (const auto& o : c.options) {
      if (!IsIdentifier(o) || !opts.insert(o).second) {
        throw Error(ErrorCode::kInvalidArgument, "bad or duplicate option id");
      }
    }
    if (c.min_selections < 0 || c.max_selections < 1 || c.min_selections > c.max_selections ||
        c.max_selections > static_cast<int>(c.options.size())) {
      throw Error(ErrorCode::kInvalidArgument, "bad selection rules");
    }
  }
}

const Contest* Ballot::Find(std::string_view contest_id) const {
  for (const auto& c : contests) {
    if (c.contest_id == contest_id) return &c;
  }
  return nullptr;
}

json Ballot::ToJson() const {
  json cs = json::array();
  for (const auto& c : contests) {
    cs.push_back({{"contest_id", c.contest_id},
                  {"options", c.options},
                  {"min_selections", c.min_selections},
                  {"max_selections", c.max_selections},
                  {"allows_explicit_invalid", true}});
  }
  return {{"ballot_id", ballot_id}, {"contests", cs}};
}

Ballot Ballot::FromJson(const json& j) {
  Ballot b;
  try {
    b.ballot_id = j.at("ballot_id").get<std::string>();
    for (const auto& c : j.at("contests")) {
      Contest contest;
      contest.contest_id = c.at("contest_id").get<std::string>();
      contest.options = c.at("options").get<std::vector<std::string>>();
      contest.min_selections = c.value("min_selections", 0);
      contest.max_selections = c.value("max_selections", 1);
      b.contests.push_back(std::move(contest));
    }
  } catch (const json::exception&) {
    throw Error(ErrorCode::kMalformed, "malformed ballot");
  }
  b.Check();
  return b;
}

std::string VoteContent::Canonical() const {
  std::string out;
  for (const auto& [id, choice] : choices) {
    out += id;
    out += '=';
    if (choice.invalid) {
      out += kInvalidMarker;
    } else {
      bool first = true;
      for (const auto& s : choice.selections) {
        if (!first) out += ',';
        out += s;
        first = false;
      }
    }
    out += ';';
  }
  return out;
}

VoteContent VoteContent::ParseCanonical(std::string_view text) {
  const std::string original(text);
  VoteContent v;
  while (!text.empty()) {
    auto semi = text.find(';');
    auto eq = text.find('=');
    if (semi == std::string_view::npos || eq == std::string_view::npos || eq > semi) {
      throw Error(ErrorCode::kMalformed, "malformed vote content");
    }
    std::string id(text.substr(0, eq));
    std::string_view body = text.substr(eq + 1, semi - eq - 1);
    if (!IsIdentifier(id) || v.choices.contains(id)) {
      throw Error(ErrorCode::kMalformed, "malformed vote content");
    }
    ContestChoice choice;
    if (body == kInvalidMarker) {
      choice.invalid = true;
    } else {
      while (!body.empty()) {
        auto comma = body.find(',');
        std::string opt(body.substr(0, comma));
        if (!IsIdentifier(opt) || !choice.selections.insert(opt).second) {
          throw Error(ErrorCode::kMalformed, "malformed vote content");
        }
        if (comma == std::string_view::npos) break;
        body.remove_prefix(comma + 1);
        if (body.empty()) throw Error(ErrorCode::kMalformed, "malformed vote content");
      }
    }
    v.choices.emplace(std::move(id), std::move(choice));
    text.remove_prefix(semi + 1);
  }
  if (v.Canonical() != original) throw Error(ErrorCode::kMalformed, "non-canonical vote");
  return v;
}

json VoteContent::ToJson() const {
  json j = json::object();
  for (const auto& [id, choice] : choices) {
    if (choice.invalid) {
      j[id] = kInvalidMarker;
    } else {
      j[id] = json(std::vector<std::string>(choice.selections.begin(), choice.selections.end()));
    }
  }
  return j;
}

VoteContent VoteContent::FromJson(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kMalformed, "vote must be an object");
  VoteContent v;
  for (const auto& [id, value] : j.items()) {
    ContestChoice choice;
    if (value.is_string() && value.get<std::string>() == kInvalidMarker) {
      choice.invalid = true;
    } else if (value.is_array()) {
      for (const auto& o : value) {
        if (!o.is_string() || !choice.selections.insert(o.get<std::string>()).second) {
          throw Error(ErrorCode::kMalformed, "bad selection");
        }
      }
    } else {
      throw Error(ErrorCode::kMalformed, "bad contest choice");
    }
    v.choices.emplace(id, std::move(choice));
  }
  return v;
}

VoteContent Normalize(const Ballot& ballot, VoteContent vote) {
  for (const auto& [id, choice] : vote.choices) {
    const Contest* c = ballot.Find(id);
    if (c == nullptr) throw Error(ErrorCode::kMalformed, "unknown contest");
    if (choice.invalid) {
      if (!choice.selections.empty()) throw Error(ErrorCode::kMalformed, "invalid with selections");
      continue;
    }
    for (const auto& s : choice.selections) {
      if (std::find(c->options.begin(), c->options.end(), s) == c->options.end()) {
        throw Error(ErrorCode::kMalformed, "unknown option");
      }
    }
    const int n = static_cast<int>(choice.selections.size());
    if (n < c->min_selections || n > c->max_selections) {
      throw Error(ErrorCode::kMalformed, "selection count outside contest rules");
    }
  }
  for (const auto& c : ballot.contests) {
    if (!vote.choices.contains(c.contest_id)) {
      if (c.min_selections > 0) throw Error(ErrorCode::kMalformed, "contest missing");
      vote.choices[c.contest_id] = {};
    }
  }
  return vote;
}

const ContestTally* TallyResult::Find(std::string_view contest_id) const {
  for (const auto& c : contests) {
    if (c.contest_id == contest_id) return &c;
  }
  return nullptr;
}

std::string TallyResult::CanonicalBytes() const {
  json j = ToJson();
  j.erase("signature");
  return "evote-tally-v1\n" + j.dump();
}

json TallyResult::ToJson() const {
  json cs = json::array();
  for (const auto& c : contests) {
    cs.push_back({{"contest_id", c.contest_id},
                  {"counts", c.counts},
                  {"invalid", c.invalid},
                  {"valid_ballots", c.valid_ballots}});
  }
  json j{{"ballot_id", ballot_id}, {"contests", cs}, {"total_votes", total_votes}};
  if (!signature.bytes.empty()) j["signature"] = wire::EncodeSignature(signature);
  return j;
}

TallyResult TallyResult::FromJson(const json& j) {
  TallyResult r;
  try {
    r.ballot_id = j.at("ballot_id").get<std::string>();
    r.total_votes = j.at("total_votes").get<std::int64_t>();
    for (const auto& c : j.at("contests")) {
      ContestTally t;
      t.contest_id = c.at("contest_id").get<std::string>();
      t.counts = c.at("counts").get<std::map<std::string, std::int64_t>>();
      t.invalid = c.at("invalid").get<std::int64_t>();
      t.valid_ballots = c.at("valid_ballots").get<std::int64_t>();
      r.contests.push_back(std::move(t));
    }
    if (j.contains("signature")) r.signature = wire::DecodeSignature(j.at("signature"));
  } catch (const json::exception&) {
    throw Error(ErrorCode::kMalformed, "malformed tally result");
  }
  return r;
}

TallyResult EmptyTally(const Ballot& ballot) {
  TallyResult r;
  r.ballot_id = ballot.ballot_id;
  for (const auto& c : ballot.contests) {
    ContestTally t;
    t.contest_id = c.contest_id;
    for (const auto& o : c.options) t.counts[o] = 0;
    r.contests.push_back(std::move(t));
  }
  return r;
}

void CountVote(TallyResult& result, const VoteContent& vote) {
  for (auto& t : result.contests) {
    auto it = vote.choices.find(t.contest_id);
    if (it == vote.choices.end() || it->second.invalid) {
      ++t.invalid;
      continue;
    }
    for (const auto& s : it->second.selections) {
      auto count = t.counts.find(s);
      if (count == t.counts.end()) throw Error(ErrorCode::kCorrupted, "vote names unknown option");
      ++count->second;
    }
    ++t.valid_ballots;
  }
  ++result.total_votes;
}

bool VerifyTally(const TallyResult& result, const crypto::PublicKey& ballot_box) {
  return crypto::Verify(ballot_box, AsBytes(result.CanonicalBytes()), result.signature);
}

}  // namespace evote::ballotbox
