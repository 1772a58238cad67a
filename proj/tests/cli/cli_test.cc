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

#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <netinet/in.h>
#include <unistd.h>

#include <gtest/gtest.h>
#include <httplib.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "evote/credentials/credentials.h"
#include "evote/harness/http_api.h"
#include "evote/wire/http.h"

namespace evote {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int exit = -1;
  std::string out;
  std::string err;
  json Json() const { return json::parse(out.substr(0, out.find('\n'))); }
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Spit(const fs::path& p, std::string_view data) {
  std::ofstream(p, std::ios::binary) << data;
}

// Keygen order is ers, vs, bbs, committee; communication then database.
std::string Passphrase(int component, bool database) {
  return std::string(database ? "db-" : "comm-") + std::to_string(component) + "-secret";
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fs::path(fs::temp_directory_path() / ("evote-cli-" + std::to_string(::getpid())));
    fs::remove_all(*dir_);
    fs::create_directories(*dir_);
    std::string all;
    for (int c = 0; c < 4; ++c) all += Passphrase(c, false) + "\n" + Passphrase(c, true) + "\n";
    ASSERT_EQ(Run("keygen --keys keys --kdf fast --passphrase-fd 3", all).exit, 0);
    ASSERT_EQ(Run("credentials generate --count 6 --seed 9 --out creds.tsv").exit, 0);
    ASSERT_EQ(Run("credentials sign --credentials creds.tsv --keys keys --out records.tsv "
                  "--passphrase-fd 3",
                  Passphrase(0, false) + "\n" + Passphrase(1, false) + "\n")
                  .exit,
              0);
    ASSERT_EQ(Run("register build --records records.tsv --keys keys --out register.txt "
                  "--passphrase-fd 3",
                  Passphrase(0, false) + "\n")
                  .exit,
              0);
  }
  static void TearDownTestSuite() {
    fs::remove_all(*dir_);
    delete dir_;
  }

  // Runs the CLI in the ceremony directory; `fd3` is offered on descriptor 3.
  static Result Run(const std::string& args, const std::string& fd3 = "") {
    static int n = 0;
    const fs::path base = *dir_ / (".run" + std::to_string(++n));
    Spit(base.string() + ".in", fd3);
    const std::string cmd = "cd '" + dir_->string() + "' && '" EVOTE_CLI "' " + args + " 3<'" +
                            base.string() + ".in' >'" + base.string() + ".out' 2>'" +
                            base.string() + ".err' </dev/null";
    const int status = std::system(cmd.c_str());
    Result r;
    r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(base.string() + ".out");
    r.err = Slurp(base.string() + ".err");
    return r;
  }

  static fs::path* dir_;
};

fs::path* CliTest::dir_ = nullptr;

TEST_F(CliTest, CeremonyThenRegisterVerifies) {
  Result r = Run("register verify --register register.txt --keys keys --json");
  ASSERT_EQ(r.exit, 0) << r.err;
  EXPECT_TRUE(r.Json()["ok"]);
  EXPECT_EQ(r.Json()["records"], 6);
  for (const char* marker : {"creds.tsv.done", "records.tsv.done", "register.txt.done",
                             "keys/ers.done", "keys/committee.done"}) {
    EXPECT_TRUE(fs::exists(*dir_ / marker)) << marker;
  }
}

TEST_F(CliTest, TamperedRegisterRecordIsFlagged) {
  std::string text = Slurp(*dir_ / "register.txt");
  // Second line is the first record: R, id, hash, sig_ers, sig_vs.
  const auto line = text.find('\n') + 1;
  const auto id_end = text.find('\t', line + 2);
  const std::string voter = text.substr(line + 2, id_end - line - 2);
  const auto hash_at = id_end + 1;
  text[hash_at] = text[hash_at] == 'A' ? 'B' : 'A';
  Spit(*dir_ / "tampered.txt", text);
  Result r = Run("register verify --register tampered.txt --keys keys --json");
  EXPECT_EQ(r.exit, 1);
  EXPECT_FALSE(r.Json()["ok"]);
  EXPECT_EQ(r.Json()["flagged"], json::array({voter}));
  Result plain = Run("register verify --register tampered.txt --keys keys");
  EXPECT_NE(plain.out.find(voter), std::string::npos);
}

TEST_F(CliTest, OutputsAreNotReplacedWithoutForceAndYes) {
  ASSERT_EQ(Run("credentials generate --count 2 --out extra.tsv").exit, 0);
  Result again = Run("credentials generate --count 2 --out extra.tsv --json");
  EXPECT_EQ(again.exit, 2);
  EXPECT_EQ(again.Json()["error"]["code"], "already_exists");
  EXPECT_EQ(Run("credentials generate --count 2 --out extra.tsv --force").exit, 2);
  EXPECT_EQ(Run("credentials generate --count 3 --out extra.tsv --force --yes").exit, 0);
  EXPECT_EQ(credentials::ImportCredentials(Slurp(*dir_ / "extra.tsv")).size(), 3u);
  EXPECT_EQ(Run("keygen --keys keys --kdf fast --component ers --passphrase-fd 3", "a\nb\n").exit, 2);
}

TEST_F(CliTest, IncompleteStepIsRefused) {
  fs::copy_file(*dir_ / "records.tsv", *dir_ / "partial.tsv");
  Result r = Run("register build --records partial.tsv --keys keys --out partial-register.txt "
                 "--passphrase-fd 3",
                 Passphrase(0, false) + "\n");
  EXPECT_EQ(r.exit, 2);
  EXPECT_NE(r.err.find("did not complete"), std::string::npos);
  EXPECT_FALSE(fs::exists(*dir_ / "partial-register.txt"));
}

TEST_F(CliTest, WrongPassphraseLeavesNoOutput) {
  Result r = Run("register build --records records.tsv --keys keys --out other.txt --passphrase-fd 3",
                 "not-the-passphrase\n");
  EXPECT_EQ(r.exit, 2);
  EXPECT_FALSE(fs::exists(*dir_ / "other.txt"));
  EXPECT_FALSE(fs::exists(*dir_ / "other.txt.done"));
}

TEST_F(CliTest, PassphrasesAreNotAcceptedOnTheCommandLine) {
  EXPECT_EQ(Run("keygen --keys k2 --passphrase secret").exit, 2);
  // Without a terminal or descriptor there is no passphrase source.
  Result r = Run("register build --records records.tsv --keys keys --out r9.txt");
  EXPECT_EQ(r.exit, 2);
  EXPECT_NE(r.err.find("--passphrase-fd"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Run("").exit, 2);
  EXPECT_EQ(Run("frobnicate").exit, 2);
  EXPECT_EQ(Run("credentials generate --out x.tsv").exit, 2);
  Spit(*dir_ / "bad-script.json", R"({"name":"x","config":{"colour":"red"},"timeline":[]})");
  Result r = Run("simulate bad-script.json --json");
  EXPECT_EQ(r.exit, 2);
  EXPECT_TRUE(r.Json().contains("error"));
}

TEST_F(CliTest, SimulateSevenVoteScript) {
  Result r = Run("simulate '" EVOTE_DATA_DIR "/seven_votes.json' --json");
  ASSERT_EQ(r.exit, 0) << r.out << r.err;
  json report = r.Json();
  EXPECT_EQ(report["tally"]["c1"]["a"], 4);
  EXPECT_EQ(report["tally"]["c1"]["b"], 2);
  EXPECT_EQ(report["tally"]["c1"]["!invalid"], 1);
  EXPECT_TRUE(report["tally_matches_oracle"]);
  EXPECT_EQ(report["oracle"]["tally"], report["tally"]);
  Result text = Run("simulate '" EVOTE_DATA_DIR "/seven_votes.json'");
  EXPECT_NE(text.out.find("!invalid=1 a=4 b=2 c=0"), std::string::npos) << text.out;
}

TEST_F(CliTest, SimulateReportsMismatchWithExitOne) {
  json script = json::parse(Slurp(EVOTE_DATA_DIR "/seven_votes.json"));
  script["expected_tally"]["c1"]["a"] = 5;
  Spit(*dir_ / "wrong.json", script.dump());
  Result r = Run("simulate wrong.json --json");
  EXPECT_EQ(r.exit, 1);
  EXPECT_FALSE(r.Json()["tally_matches_expected"]);
}

int FreePort() {
  int s = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in a{};
  a.sin_family = AF_INET;
  a.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ::bind(s, reinterpret_cast<sockaddr*>(&a), sizeof a);
  socklen_t len = sizeof a;
  ::getsockname(s, reinterpret_cast<sockaddr*>(&a), &len);
  ::close(s);
  return ntohs(a.sin_port);
}

// One `evote serve` child process.
class Server {
 public:
  Server(const fs::path& dir, const std::vector<std::string>& args, const std::string& fd3)
      : out_(dir / (args[1] + ".serve.out")) {
    const fs::path in = dir / (args[1] + ".serve.in");
    Spit(in, fd3);
    posix_spawn_file_actions_t fa;
    posix_spawn_file_actions_init(&fa);
    posix_spawn_file_actions_addopen(&fa, 0, "/dev/null", O_RDONLY, 0);
    posix_spawn_file_actions_addopen(&fa, 1, out_.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    posix_spawn_file_actions_addopen(&fa, 3, in.c_str(), O_RDONLY, 0);
    std::vector<std::string> full = {EVOTE_CLI, "--json"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : full) argv.push_back(a.data());
    argv.push_back(nullptr);
    posix_spawn(&pid_, EVOTE_CLI, &fa, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&fa);
  }
  ~Server() { Stop(); }

  bool WaitReady() {
    for (int i = 0; i < 200; ++i) {
      if (Slurp(out_).find("\"address\"") != std::string::npos) return true;
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    return false;
  }

  int Stop() {
    if (pid_ <= 0) return status_;
    ::kill(pid_, SIGTERM);
    int st = 0;
    ::waitpid(pid_, &st, 0);
    pid_ = -1;
    status_ = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return status_;
  }

 private:
  fs::path out_;
  pid_t pid_ = -1;
  int status_ = -1;
};

class Officer {
 public:
  Officer(int port, const std::string& id, const std::string& password) : client_("127.0.0.1", port) {
    client_.set_read_timeout(30);
    auto r = client_.Post("/v1/officer/login", json{{"officer_id", id}, {"password", password}}.dump(),
                          "application/json");
    session_ = json::parse(r->body).at("session_id");
  }
  json Post(const std::string& path, const json& body = json::object()) {
    auto r = client_.Post(path, {{wire::kSessionHeader, session_}}, body.dump(), "application/json");
    EXPECT_EQ(r->status, 200) << path << " " << r->body;
    return json::parse(r->body);
  }
  json Get(const std::string& path) {
    auto r = client_.Get(path, {{wire::kSessionHeader, session_}});
    return json::parse(r->body);
  }

 private:
  httplib::Client client_;
  std::string session_;
};

TEST_F(CliTest, ServedElectionThenOfflineVerification) {
  const fs::path dir = *dir_;
  json config = json::parse(Slurp(EVOTE_DATA_DIR "/election.json"));
  config["grace_ms"] = 1000;
  config["block_size"] = 4;
  Spit(dir / "election.json", config.dump());

  const std::vector<std::string> names = {"ers", "vs", "bbs", "committee"};
  std::map<std::string, int> ports;
  for (const auto& n : names) ports[n] = FreePort();
  std::vector<std::unique_ptr<Server>> servers;
  for (const auto& n : names) {
    std::vector<std::string> args = {"serve",  n,           "--config", (dir / "election.json").string(),
                                     "--keys", (dir / "keys").string(), "--data",
                                     (dir / "data" / n).string(), "--bind",
                                     "127.0.0.1:" + std::to_string(ports[n]), "--kdf", "fast"};
    for (const auto& peer : names) {
      if (peer != n) args.insert(args.end(), {"--peer", peer + "=127.0.0.1:" + std::to_string(ports[peer])});
    }
    if (n == "ers") args.insert(args.end(), {"--register", (dir / "register.txt").string()});
    if (n == "committee") args.insert(args.end(), {"--passphrase-fd", "3"});
    servers.push_back(std::make_unique<Server>(
        dir, args, n == "committee" ? Passphrase(3, false) + "\n" + Passphrase(3, true) + "\n" : ""));
  }
  for (auto& s : servers) ASSERT_TRUE(s->WaitReady());

  const int cport = ports["committee"];
  Officer o1(cport, "officer1", "officer-pass-1");
  Officer o2(cport, "officer2", "officer-pass-2");
  o1.Post("/v1/officer/finish-setup");
  o1.Post("/v1/officer/authorize", {{"action", "start"}});
  o2.Post("/v1/officer/authorize", {{"action", "start"}});
  for (int c = 0; c < 3; ++c) {
    for (bool db : {false, true}) {
      o1.Post("/v1/officer/passphrase", {{"component", names[c]},
                                         {"slot", db ? "database" : "communication"},
                                         {"passphrase", Passphrase(c, db)}});
    }
  }
  ASSERT_EQ(o1.Get("/v1/officer/state")["state"], "Voting");

  auto creds = credentials::ImportCredentials(Slurp(dir / "creds.tsv"));
  harness::HttpVoterChannel voters("127.0.0.1:" + std::to_string(ports["ers"]),
                                   "127.0.0.1:" + std::to_string(ports["bbs"]));
  const std::vector<std::string> picks = {"a", "b", "a", "c", "a"};
  for (std::size_t i = 0; i < picks.size(); ++i) {
    auto s = voters.BeginLogin();
    auto outcome = voters.Login(s.session_id, s.keyboard_layout.ClicksFor(creds[i].voter_id),
                                s.keyboard_layout.ClicksFor(creds[i].password));
    ASSERT_EQ(outcome.kind, registry::AuthOutcome::Kind::kTokenIssued);
    ballotbox::VoterToken token{outcome.token, outcome.token_signature};
    EXPECT_EQ(voters.Submit(token, ballotbox::VoteContent::FromJson({{"c1", {picks[i]}}})),
              "c1=" + picks[i] + ";");
    ASSERT_TRUE(voters.Confirm(token).committed);
  }

  o1.Post("/v1/officer/authorize", {{"action", "stop"}});
  o2.Post("/v1/officer/authorize", {{"action", "stop"}});
  for (int i = 0; i < 100 && o1.Get("/v1/officer/state")["state"] != "Stopped"; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  ASSERT_EQ(o1.Get("/v1/officer/state")["state"], "Stopped");
  o1.Post("/v1/officer/authorize", {{"action", "tally"}});
  o2.Post("/v1/officer/authorize", {{"action", "tally"}});
  json result = o1.Get("/v1/officer/result");
  EXPECT_EQ(result["total_votes"], 5);
  Bytes archive = Base64Decode(o1.Post("/v1/officer/archive")["archive"].get<std::string>());
  Spit(dir / "election.evar", ToString(archive));
  for (auto& s : servers) EXPECT_EQ(s->Stop(), 0);

  Result ok = Run("verify-archive election.evar --keys keys --json");
  ASSERT_EQ(ok.exit, 0) << ok.out << ok.err;
  EXPECT_EQ(ok.Json()["members"].size(), 12u);
  std::string bad = ToString(archive);
  const std::string needle = "audit/vs.log";
  bad[bad.find(needle) + needle.size() + 4 + 3] ^= 0x01;
  Spit(dir / "bad.evar", bad);
  Result broken = Run("verify-archive bad.evar --keys keys");
  EXPECT_EQ(broken.exit, 1);
  EXPECT_NE(broken.out.find("broken member audit/vs.log"), std::string::npos) << broken.out;

  const std::string store = (dir / "data" / "bbs" / "votes.log").string();
  Result chain = Run("verify-chain '" + store + "' --keys keys --block-size 4 --sealed --json");
  ASSERT_EQ(chain.exit, 0) << chain.out << chain.err;
  std::string votes = Slurp(store);
  votes[votes.size() / 3] ^= 0x20;
  Spit(dir / "votes-bad.log", votes);
  EXPECT_EQ(Run("verify-chain votes-bad.log --keys keys --block-size 4 --sealed").exit, 1);
}

TEST_F(CliTest, BaselineDetectsOneByteArtifactChange) {
  const fs::path dir = *dir_;
  fs::copy_file(EVOTE_CLI, dir / "artifact.bin", fs::copy_options::overwrite_existing);
  Spit(dir / "other.bin", "static content");
  ASSERT_EQ(Run("baseline record --keys keys --artifact bbs=artifact.bin --artifact ers=other.bin "
                "--out baseline.json --passphrase-fd 3",
                Passphrase(3, false) + "\n")
                .exit,
            0);
  EXPECT_EQ(Run("baseline verify --baseline baseline.json --keys keys").exit, 0);
  {
    std::fstream f(dir / "artifact.bin", std::ios::in | std::ios::out | std::ios::binary);
    f.seekg(4096);
    const char c = static_cast<char>(f.get());
    f.seekp(4096);
    f.put(static_cast<char>(c ^ 0x01));
  }
  Result r = Run("baseline verify --baseline baseline.json --keys keys --json");
  EXPECT_EQ(r.exit, 1);
  EXPECT_EQ(r.Json()["artifacts"]["bbs"], "mismatch");
  EXPECT_EQ(r.Json()["artifacts"]["ers"], "ok");
}

}  // namespace
}  // namespace evote
