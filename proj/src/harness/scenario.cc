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

#include "evote/harness/scenario.h"

#include <algorithm>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include "evote/common/error.h"
#include "evote/wire/faults.h"

namespace evote::harness {
namespace {

using nlohmann::json;

const std::set<std::string, std::less<>> kActions = {
    "login", "submit", "confirm", "cancel", "abandon", "vote", "concurrent_vote", "stop",
    "advance"};

bool NeedsVoter(std::string_view action) { return action != "stop" && action != "advance"; }

std::vector<TimelineEvent> Ordered(std::vector<TimelineEvent> events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const TimelineEvent& a, const TimelineEvent& b) { return a.at < b.at; });
  return events;
}

// Oracle-side reading of a vote: contest -> selections, or nullopt for an
// explicit invalid vote. Returns nullopt when the ballot rules refuse it.
using OracleVote = std::map<std::string, std::optional<std::set<std::string>>>;

std::optional<OracleVote> OracleRead(const ballotbox::Ballot& ballot, const json& vote) {
  if (!vote.is_object()) return std::nullopt;
  OracleVote out;
  for (const auto& [id, value] : vote.items()) {
    auto contest = std::find_if(ballot.contests.begin(), ballot.contests.end(),
                                [&](const auto& c) { return c.contest_id == id; });
    if (contest == ballot.contests.end()) return std::nullopt;
    if (value == json(ballotbox::kInvalidMarker)) {
      out[id] = std::nullopt;
      continue;
    }
    if (!value.is_array()) return std::nullopt;
    std::set<std::string> picks;
    for (const auto& o : value) {
      if (!o.is_string()) return std::nullopt;
      const auto name = o.get<std::string>();
      if (std::count(contest->options.begin(), contest->options.end(), name) == 0) {
        return std::nullopt;
      }
      if (!picks.insert(name).second) return std::nullopt;
    }
    const auto n = static_cast<int>(picks.size());
    if (n < contest->min_selections || n > contest->max_selections) return std::nullopt;
    out[id] = picks;
  }
  for (const auto& c : ballot.contests) {
    if (out.contains(c.contest_id)) continue;
    if (c.min_selections > 0) return std::nullopt;
    out[c.contest_id] = std::set<std::string>{};
  }
  return out;
}

std::string WrongPassword(std::string pw) {
  pw.back() = pw.back() == 'a' ? 'b' : 'a';
  return pw;
}

}  // namespace

json TimelineEvent::ToJson() const {
  json j{{"at_ms", at}, {"action", action}};
  if (voter >= 0) j["voter"] = voter;
  if (vote) j["vote"] = *vote;
  if (wrong_password) j["wrong_password"] = true;
  if (action == "concurrent_vote") j["ways"] = ways;
  return j;
}

TimelineEvent TimelineEvent::FromJson(const json& j) {
  static const std::set<std::string> kKnown = {"at_ms", "action", "voter", "vote",
                                               "wrong_password", "ways"};
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "timeline entry must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!kKnown.contains(k)) throw Error(ErrorCode::kInvalidArgument, "unknown timeline key " + k);
  }
  TimelineEvent e;
  try {
    e.at = j.value("at_ms", Millis{0});
    e.action = j.at("action").get<std::string>();
    e.voter = j.value("voter", -1);
    if (j.contains("vote")) e.vote = j.at("vote");
    e.wrong_password = j.value("wrong_password", false);
    e.ways = j.value("ways", e.action == "concurrent_vote" ? 8 : 1);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad timeline entry: ") + ex.what());
  }
  return e;
}

json CompactTallyToJson(const CompactTally& t) {
  json j = json::object();
  for (const auto& [contest, counts] : t) j[contest] = counts;
  return j;
}

CompactTally CompactTallyFromJson(const json& j) {
  try {
    return j.get<CompactTally>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad tally: ") + e.what());
  }
}

CompactTally Compact(const ballotbox::TallyResult& r) {
  CompactTally out;
  for (const auto& c : r.contests) {
    auto& m = out[c.contest_id];
    for (const auto& [opt, n] : c.counts) m[opt] = n;
    m[std::string(ballotbox::kInvalidMarker)] = c.invalid;
  }
  return out;
}

void ScenarioScript::Check() const {
  config.Check();
  for (const auto& e : timeline) {
    if (!kActions.contains(e.action)) {
      throw Error(ErrorCode::kInvalidArgument, "unknown action " + e.action);
    }
    if (e.at < 0) throw Error(ErrorCode::kInvalidArgument, "negative event time");
    if (NeedsVoter(e.action) &&
        (e.voter < 0 || e.voter >= static_cast<int>(config.voters))) {
      throw Error(ErrorCode::kInvalidArgument, "voter index out of range");
    }
    if ((e.action == "submit" || e.action == "vote" || e.action == "concurrent_vote") && !e.vote) {
      throw Error(ErrorCode::kInvalidArgument, e.action + " needs a vote");
    }
    if (e.ways < 1 || e.ways > 64) throw Error(ErrorCode::kInvalidArgument, "ways out of range");
  }
}

json ScenarioScript::ToJson() const {
  json t = json::array();
  for (const auto& e : timeline) t.push_back(e.ToJson());
  json j{{"name", name}, {"config", config.ToJson()}, {"timeline", t}};
  if (expected_tally) j["expected_tally"] = CompactTallyToJson(*expected_tally);
  if (!faults.empty()) {
    json f = json::array();
    for (const auto& x : faults) f.push_back(x.ToJson());
    j["faults"] = f;
  }
  return j;
}

ScenarioScript ScenarioScript::FromJson(const json& j) {
  static const std::set<std::string> kKnown = {"name", "config", "timeline", "expected_tally",
                                               "faults"};
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "script must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!kKnown.contains(k)) throw Error(ErrorCode::kInvalidArgument, "unknown script key " + k);
  }
  ScenarioScript s;
  s.name = j.value("name", "");
  s.config = ElectionConfig::FromJson(j.value("config", json::object()));
  if (!j.contains("timeline") || !j.at("timeline").is_array()) {
    throw Error(ErrorCode::kInvalidArgument, "script needs a timeline array");
  }
  for (const auto& e : j.at("timeline")) s.timeline.push_back(TimelineEvent::FromJson(e));
  if (j.contains("expected_tally")) s.expected_tally = CompactTallyFromJson(j.at("expected_tally"));
  if (j.contains("faults")) {
    try {
      for (const auto& f : j.at("faults")) s.faults.push_back(wire::Fault::FromJson(f));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument, std::string("bad fault: ") + e.what());
    }
  }
  s.Check();
  return s;
}

OracleResult PlaintextOracle(const ScenarioScript& script, const wire::FaultPlan& faults) {
  OracleResult out;
  const auto& ballot = script.config.ballot;
  for (const auto& c : ballot.contests) {
    auto& m = out.tally[c.contest_id];
    for (const auto& o : c.options) m[o] = 0;
    m[std::string(ballotbox::kInvalidMarker)] = 0;
  }
  for (const auto& f : faults) {
    if (f.target != "confirm_vote" || f.kind != wire::FaultKind::kCrash) out.applicable = false;
  }
  // The vote record is durable once flushed: a crash at any later step
  // boundary leaves the vote stored.
  const auto flush = std::find(ballotbox::kConfirmSteps.begin(), ballotbox::kConfirmSteps.end(),
                               "before_flush");
  const int first_durable_step = static_cast<int>(flush - ballotbox::kConfirmSteps.begin()) + 1;

  enum class S { kEligible, kSession, kVoted };
  struct Voter {
    S state = S::kEligible;
    Millis since = 0;
    bool has_token = false;  // false once the browser walked away
    std::optional<OracleVote> pending;
  };
  std::vector<Voter> voters(script.config.voters);
  std::optional<Millis> stop_at;
  bool closed = false;
  int confirms = 0;

  auto end_sessions = [&] {
    for (auto& v : voters) {
      if (v.state == S::kSession) v = Voter{};
    }
  };
  auto tick = [&](Millis t) {
    if (stop_at && !closed && t >= *stop_at + script.config.grace_period) {
      closed = true;
      end_sessions();
    }
    for (auto& v : voters) {
      if (v.state == S::kSession && t >= v.since + script.config.session_expiry) v = Voter{};
    }
  };
  auto login = [&](Voter& v, bool wrong, Millis t) {
    if (stop_at || closed || wrong || v.state != S::kEligible) return;
    v.state = S::kSession;
    v.since = t;
    v.has_token = true;
    v.pending.reset();
  };
  auto submit = [&](Voter& v, const json& vote) {
    if (v.state != S::kSession || !v.has_token) return;
    if (auto read = OracleRead(ballot, vote)) v.pending = *read;
  };
  auto confirm = [&](Voter& v) {
    if (v.state != S::kSession || !v.has_token || !v.pending) return;
    const int occurrence = confirms++;
    std::optional<int> crash_step;
    for (const auto& f : faults) {
      if (f.target == "confirm_vote" && f.kind == wire::FaultKind::kCrash &&
          f.occurrence == occurrence && f.step >= 0 &&
          f.step < static_cast<int>(ballotbox::kConfirmSteps.size())) {
        crash_step = std::min(crash_step.value_or(f.step), f.step);
      }
    }
    if (crash_step && *crash_step < first_durable_step) {
      end_sessions();
      return;
    }
    for (const auto& [contest, picks] : *v.pending) {
      auto& m = out.tally[contest];
      if (!picks) {
        ++m[std::string(ballotbox::kInvalidMarker)];
        continue;
      }
      for (const auto& p : *picks) ++m[p];
    }
    ++out.total;
    v = Voter{};
    v.state = S::kVoted;
    // A ballot box restart drops every other token.
    if (crash_step) end_sessions();
  };

  for (const auto& e : Ordered(script.timeline)) {
    tick(e.at);
    if (e.action == "stop") {
      if (!stop_at) stop_at = e.at;
      continue;
    }
    if (!NeedsVoter(e.action)) continue;
    Voter& v = voters.at(e.voter);
    if (e.action == "login") {
      login(v, e.wrong_password, e.at);
    } else if (e.action == "submit") {
      submit(v, *e.vote);
    } else if (e.action == "confirm") {
      confirm(v);
    } else if (e.action == "cancel") {
      if (v.state == S::kSession && v.has_token) v = Voter{};
    } else if (e.action == "abandon") {
      v.has_token = false;
      v.pending.reset();
    } else if (e.action == "vote" || e.action == "concurrent_vote") {
      login(v, e.wrong_password, e.at);
      submit(v, *e.vote);
      confirm(v);
    }
  }
  return out;
}

bool ScenarioReport::ok() const {
  if (!error.empty() || !tally_signature_ok) return false;
  if (oracle.applicable && !tally_matches_oracle) return false;
  if (tally_matches_expected && !*tally_matches_expected) return false;
  return std::all_of(invariants.begin(), invariants.end(),
                     [](const auto& kv) { return kv.second.ok; });
}

json ScenarioReport::ToJson() const {
  json inv = json::object();
  for (const auto& [name, r] : invariants) inv[name] = {{"ok", r.ok}, {"detail", r.detail}};
  json fired = json::array();
  for (const auto& f : faults_fired) fired.push_back(f.ToJson());
  json j{{"name", name},
         {"seed", seed},
         {"tally", CompactTallyToJson(tally)},
         {"total_votes", total_votes},
         {"tally_signature_ok", tally_signature_ok},
         {"oracle", {{"tally", CompactTallyToJson(oracle.tally)},
                     {"total_votes", oracle.total},
                     {"applicable", oracle.applicable}}},
         {"tally_matches_oracle", tally_matches_oracle},
         {"invariants", inv},
         {"outcomes", outcomes},
         {"audit_histogram", audit_histogram},
         {"faults_fired", fired},
         {"ok", ok()}};
  if (tally_matches_expected) j["tally_matches_expected"] = *tally_matches_expected;
  if (!error.empty()) j["error"] = error;
  return j;
}

std::string ScenarioReport::Serialize() const { return ToJson().dump(2) + "\n"; }

ScenarioReport RunScenario(const ScenarioScript& script, const wire::FaultPlan& extra_faults,
                           std::uint64_t seed, const ScenarioOptions& options) {
  script.Check();
  wire::FaultPlan plan = script.faults;
  plan.insert(plan.end(), extra_faults.begin(), extra_faults.end());

  ScenarioReport rep;
  rep.name = script.name;
  rep.seed = seed;
  rep.oracle = PlaintextOracle(script, plan);
  rep.invariants["crash_atomicity"] = {};

  std::mutex out_mu;
  auto outcome = [&](const std::string& k) {
    std::lock_guard lock(out_mu);
    ++rep.outcomes[k];
  };
  auto fail = [&](const std::string& name, const std::string& detail) {
    auto& r = rep.invariants[name];
    if (r.ok) r.detail = detail;
    r.ok = false;
  };

  try {
    Deployment d(script.config, seed, options.mode);
    d.SetFaults(plan);
    d.StartCommittee();
    d.OpenElection();

    std::map<int, ballotbox::VoterToken> held;
    std::map<int, std::string> pending;
    std::map<int, int> commits;
    std::map<int, std::string> cast_content;
    std::vector<Bytes> tokens;
    int max_concurrent_tokens = 0;

    auto login = [&](int v, bool wrong) -> std::optional<ballotbox::VoterToken> {
      credentials::Credential c = d.credentials().at(v);
      if (wrong) c.password = WrongPassword(c.password);
      try {
        auto o = d.Login(c);
        switch (o.kind) {
          case registry::AuthOutcome::Kind::kTokenIssued: {
            outcome("login_token_issued");
            std::lock_guard lock(out_mu);
            tokens.push_back(ToBytes(o.token.view()));
            return Deployment::TokenOf(o);
          }
          case registry::AuthOutcome::Kind::kAlreadyVoted:
            outcome("login_already_voted");
            break;
          case registry::AuthOutcome::Kind::kRejected:
            outcome("login_rejected");
            break;
        }
      } catch (const Error& e) {
        outcome("login_error_" + std::string(ErrorCodeName(e.code())));
      }
      return std::nullopt;
    };
    auto submit = [&](int v, const json& vote) {
      auto it = held.find(v);
      if (it == held.end()) return outcome("submit_without_token");
      try {
        pending[v] = d.voters().Submit(it->second, ballotbox::VoteContent::FromJson(vote));
        outcome("submit_echoed");
      } catch (const Error& e) {
        outcome("submit_error_" + std::string(ErrorCodeName(e.code())));
      }
    };
    auto confirm = [&](int v) {
      auto it = held.find(v);
      if (it == held.end()) return outcome("confirm_without_token");
      ballotbox::VoterToken token = std::move(it->second);
      held.erase(it);
      const std::int64_t before = d.ballot_box().StoredCount();
      bool committed = false;
      bool crashed = false;
      try {
        committed = d.voters().Confirm(token).committed;
      } catch (const wire::CrashSignal&) {
        crashed = true;
      } catch (const Error& e) {
        outcome("confirm_error_" + std::string(ErrorCodeName(e.code())));
      }
      for (Component c : d.RestartCrashed()) crashed |= c == Component::kBallotBox;
      if (!crashed && !committed) {
        // Refused: the browser still holds the token.
        held[v] = std::move(token);
        return;
      }
      if (crashed) {
        outcome("confirm_crashed");
        const std::int64_t delta = d.ballot_box().StoredCount() - before;
        committed = delta == 1;
        if (delta != 0 && delta != 1) fail("crash_atomicity", "store grew by more than one vote");
        try {
          d.ballot_box().FetchBallot(token);
          fail("crash_atomicity", "token still live after restart");
        } catch (const Error&) {
        }
        const bool voted =
            d.registry().StateOf(d.credentials().at(v).voter_id) == registry::VoterState::kVoted;
        if (voted != committed) fail("crash_atomicity", "registry disagrees with the store");
        if (!d.ballot_box().VerifyChain().ok()) fail("crash_atomicity", "chain broken after restart");
      } else if (committed) {
        outcome("confirm_committed");
      }
      if (committed) {
        ++commits[v];
        cast_content[v] = pending[v];
      }
      pending.erase(v);
    };

    const auto events = Ordered(script.timeline);
    bool stopped = false;
    for (const auto& e : events) {
      d.AdvanceTo(e.at);
      if (e.action == "stop") {
        if (d.committee().state() == committee::ElectionState::kVoting) {
          d.AuthorizeStop();
          stopped = true;
        } else {
          outcome("stop_ignored");
        }
      } else if (e.action == "login") {
        if (auto t = login(e.voter, e.wrong_password)) {
          held[e.voter] = std::move(*t);
          pending.erase(e.voter);
        }
      } else if (e.action == "submit") {
        submit(e.voter, *e.vote);
      } else if (e.action == "confirm") {
        confirm(e.voter);
      } else if (e.action == "cancel") {
        auto it = held.find(e.voter);
        if (it == held.end()) {
          outcome("cancel_without_token");
        } else {
          try {
            d.voters().Cancel(it->second);
            outcome("cancelled");
          } catch (const Error& ex) {
            outcome("cancel_error_" + std::string(ErrorCodeName(ex.code())));
          }
          held.erase(it);
          pending.erase(e.voter);
        }
      } else if (e.action == "abandon") {
        held.erase(e.voter);
        pending.erase(e.voter);
      } else if (e.action == "vote") {
        if (auto t = login(e.voter, e.wrong_password)) {
          held[e.voter] = std::move(*t);
          pending.erase(e.voter);
        }
        submit(e.voter, *e.vote);
        confirm(e.voter);
      } else if (e.action == "concurrent_vote") {
        std::vector<ballotbox::VoterToken> issued;
        std::mutex issued_mu;
        std::vector<std::thread> threads;
        for (int i = 0; i < e.ways; ++i) {
          threads.emplace_back([&] {
            if (auto t = login(e.voter, e.wrong_password)) {
              std::lock_guard lock(issued_mu);
              issued.push_back(std::move(*t));
            }
          });
        }
        for (auto& t : threads) t.join();
        max_concurrent_tokens = std::max(max_concurrent_tokens, static_cast<int>(issued.size()));
        // Every issued token casts, so a second token would show up as a
        // second vote. With none issued an earlier session is used.
        for (auto& t : issued) {
          held[e.voter] = std::move(t);
          pending.erase(e.voter);
          submit(e.voter, *e.vote);
          confirm(e.voter);
        }
        if (issued.empty()) {
          submit(e.voter, *e.vote);
          confirm(e.voter);
        }
      }
      d.RestartCrashed();
    }

    if (!stopped) {
      d.AdvanceTo((events.empty() ? 0 : events.back().at) + kSecond);
      d.AuthorizeStop();
    }
    if (d.committee().state() == committee::ElectionState::kGracePeriod) d.FinishStop();
    if (d.committee().state() != committee::ElectionState::kStopped ||
        d.committee().stop_sequence_halted()) {
      throw Error(ErrorCode::kIllegalState, "stop sequence did not complete");
    }

    // Everything below inspects the stopped election.
    const auto counts = d.registry().counts();
    const std::int64_t stored = d.ballot_box().StoredCount();
    std::int64_t committed_total = 0;
    rep.invariants["one_vote_per_credential"] = {};
    for (const auto& [v, n] : commits) {
      committed_total += n;
      if (n > 1) fail("one_vote_per_credential", "voter index " + std::to_string(v) + " cast " +
                                                     std::to_string(n) + " votes");
    }
    if (max_concurrent_tokens > 1) fail("one_vote_per_credential", "parallel logins got two tokens");
    if (committed_total != stored) fail("one_vote_per_credential", "stored votes != committed casts");
    if (counts.voted != stored) fail("one_vote_per_credential", "voted voters != stored votes");

    rep.invariants["counts_sum"] = {};
    if (counts.eligible + counts.session_active + counts.voted !=
        static_cast<std::int64_t>(script.config.voters)) {
      fail("counts_sum", "eligible + active + voted != electorate");
    }

    rep.invariants["two_man_rule"] = {};
    {
      std::int64_t contacted = 0, approved = 0, issued = 0;
      for (const auto& ev : d.trace()) {
        if (ev == "validator_contacted") ++contacted;
        if (ev == "validator_approved") ++approved;
        if (ev == "token_issued") ++issued;
        if (approved > contacted || issued > approved) {
          fail("two_man_rule", "token issued without validator approval");
          break;
        }
      }
    }

    rep.invariants["no_live_tokens"] = {};
    if (d.ballot_box().live_tokens() != 0) fail("no_live_tokens", "ballot box still holds tokens");
    if (counts.session_active != 0) fail("no_live_tokens", "registry sessions survive the stop");

    rep.invariants["vote_chain"] = {};
    {
      auto chain = d.ballot_box().VerifyChain();
      if (!chain.ok()) fail("vote_chain", chain.issues.empty() ? "failed" : chain.issues.front());
    }

    rep.invariants["unlinkability_stores"] = {};
    rep.invariants["unlinkability_audit"] = {};
    auto token_forms = [&](const Bytes& t) {
      return std::vector<std::string>{ToString(t), HexEncode(t), Base64Encode(t)};
    };
    for (const auto& [c, image] : d.DurableStores()) {
      const ByteView bytes = AsBytes(image);
      for (const auto& t : tokens) {
        for (const auto& form : token_forms(t)) {
          if (ContainsBytes(bytes, AsBytes(form))) {
            fail("unlinkability_stores", "token found in " + std::string(ComponentName(c)));
          }
        }
      }
      for (const auto& [v, content] : cast_content) {
        const auto& id = d.credentials().at(v).voter_id;
        if (ContainsBytes(bytes, AsBytes(id)) && ContainsBytes(bytes, AsBytes(content))) {
          fail("unlinkability_stores",
               "voter id and vote content together in " + std::string(ComponentName(c)));
        }
      }
    }
    for (const auto& [c, log] : d.AuditLogs()) {
      const ByteView bytes = AsBytes(log);
      const std::string where(ComponentName(c));
      for (const auto& cred : d.credentials()) {
        if (ContainsBytes(bytes, AsBytes(cred.voter_id))) {
          fail("unlinkability_audit", "voter id in " + where + " audit log");
        }
      }
      for (const auto& t : tokens) {
        for (const auto& form : token_forms(t)) {
          if (ContainsBytes(bytes, AsBytes(form))) fail("unlinkability_audit", "token in " + where);
        }
      }
      for (const auto& [v, content] : cast_content) {
        if (ContainsBytes(bytes, AsBytes(content))) {
          fail("unlinkability_audit", "vote content in " + where + " audit log");
        }
      }
    }

    ballotbox::TallyResult result = d.Tally();
    rep.tally = Compact(result);
    rep.total_votes = result.total_votes;
    rep.tally_signature_ok =
        ballotbox::VerifyTally(result, d.directory().at(Component::kBallotBox).communication);
    rep.tally_matches_oracle =
        rep.tally == rep.oracle.tally && rep.total_votes == rep.oracle.total;
    if (script.expected_tally) rep.tally_matches_expected = rep.tally == *script.expected_tally;

    for (const auto& [c, log] : d.AuditLogs()) {
      std::vector<std::string>* trace =
          options.audit_trace != nullptr ? &(*options.audit_trace)[c] : nullptr;
      for (const auto& ev : AuditLog::Parse(log)) {
        std::string line = std::string(ComponentName(ev.component)) + " " +
                           std::string(AuditCategoryName(ev.category)) + " " + ev.detail;
        if (trace != nullptr) trace->push_back(line);
        ++rep.audit_histogram[line];
      }
    }
    rep.faults_fired = d.bus().faults().fired();
    if (options.inspect) options.inspect(d);
  } catch (const Error& e) {
    rep.error = std::string(ErrorCodeName(e.code())) + ": " + e.what();
  } catch (const wire::CrashSignal& e) {
    rep.error = e.what();
  }
  return rep;
}

ScenarioScript RandomScenario(std::uint64_t seed, const RandomScenarioOptions& options) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::uint64_t n) { return static_cast<int>(rng() % n); };

  ScenarioScript s;
  s.name = "random-" + std::to_string(seed);
  s.config.ballot.ballot_id = "random-ballot";
  s.config.ballot.contests.push_back({"c1", {"a", "b", "c"}, 0, 1});
  s.config.ballot.contests.push_back({"c2", {"x", "y", "z"}, 0, 2});
  s.config.officers = {{"o1", "pw-o1", ""}, {"o2", "pw-o2", ""}, {"o3", "pw-o3", ""}};
  s.config.threshold = 2;
  s.config.block_size = 4;
  s.config.grace_period = 2 * kSecond;
  s.config.session_expiry = 8 * kSecond;
  s.config.voters = 6 + pick(9);

  auto random_vote = [&]() -> json {
    json v = json::object();
    switch (pick(6)) {
      case 0: v["c1"] = ballotbox::kInvalidMarker; break;
      case 1: v["c1"] = json::array(); break;
      case 2: v["c1"] = {"a", "b"}; break;  // refused: too many selections
      default: v["c1"] = {std::string(1, static_cast<char>('a' + pick(3)))}; break;
    }
    switch (pick(4)) {
      case 0: break;  // omitted: counted as no selection
      case 1: v["c2"] = ballotbox::kInvalidMarker; break;
      case 2: v["c2"] = {"x", "z"}; break;
      default: v["c2"] = {std::string(1, static_cast<char>('x' + pick(3)))}; break;
    }
    return v;
  };

  const int steps = static_cast<int>(s.config.voters) * 3;
  const int stop_step = steps * 7 / 10 + pick(steps / 5 + 1);
  Millis t = 0;
  for (int i = 0; i < steps; ++i) {
    t += pick(900);
    if (i == stop_step) {
      TimelineEvent stop;
      stop.at = t;
      stop.action = "stop";
      s.timeline.push_back(std::move(stop));
      continue;
    }
    TimelineEvent e;
    e.at = t;
    e.voter = pick(s.config.voters);
    const int r = pick(100);
    if (r < 35) {
      e.action = "vote";
      e.vote = random_vote();
    } else if (r < 47) {
      e.action = "login";
    } else if (r < 52) {
      e.action = "login";
      e.wrong_password = true;
    } else if (r < 64) {
      e.action = "submit";
      e.vote = random_vote();
    } else if (r < 76) {
      e.action = "confirm";
    } else if (r < 82) {
      e.action = "cancel";
    } else if (r < 87) {
      e.action = "abandon";
    } else if (options.concurrent_logins) {
      e.action = "concurrent_vote";
      e.vote = random_vote();
      e.ways = 8;
    } else {
      e.action = "advance";
      e.voter = -1;
      t += 3 * kSecond;
      e.at = t;
    }
    s.timeline.push_back(std::move(e));
  }
  if (options.confirm_crash) {
    wire::Fault f;
    f.target = "confirm_vote";
    f.step = pick(ballotbox::kConfirmSteps.size());
    f.occurrence = pick(3);
    f.kind = wire::FaultKind::kCrash;
    s.faults.push_back(f);
  }
  return s;
}

ScenarioScript SevenVoteScript() {
  ScenarioScript s;
  s.name = "seven-votes";
  s.config.ballot = DefaultBallot();
  s.config.officers = {{"o1", "pw-o1", ""}, {"o2", "pw-o2", ""}, {"o3", "pw-o3", ""}};
  s.config.grace_period = 2 * kSecond;
  s.config.voters = 7;
  const char* picks[] = {"a", "a", "a", "a", "b", "b", nullptr};
  for (int i = 0; i < 7; ++i) {
    TimelineEvent e;
    e.at = (i + 1) * kSecond;
    e.action = "vote";
    e.voter = i;
    e.vote = json{{"c1", picks[i] != nullptr ? json::array({picks[i]})
                                             : json(ballotbox::kInvalidMarker)}};
    s.timeline.push_back(std::move(e));
  }
  s.expected_tally = CompactTally{
      {"c1", {{"a", 4}, {"b", 2}, {"c", 0}, {std::string(ballotbox::kInvalidMarker), 1}}}};
  return s;
}

}  // namespace evote::harness
