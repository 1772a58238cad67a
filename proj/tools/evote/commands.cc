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

#include "commands.h"

#include <iostream>
#include <sstream>

#include "evote/ballotbox/vote_chain.h"
#include "evote/committee/archive.h"
#include "evote/committee/baseline.h"
#include "evote/committee/committee_service.h"
#include "evote/common/durable_log.h"
#include "evote/common/error.h"
#include "evote/credentials/credentials.h"
#include "evote/credentials/signed_register.h"
#include "evote/crypto/key_protection.h"
#include "evote/harness/scenario.h"
#include "files.h"
#include "key_store.h"
#include "passphrase.h"

namespace evote::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kCredentialsStep = "credentials generate";
constexpr std::string_view kSignStep = "credentials sign";
constexpr std::string_view kExportStep = "credentials export";
constexpr std::string_view kRegisterStep = "register build";
constexpr std::string_view kBaselineStep = "baseline record";
constexpr std::string_view kRecordsHeader = "evote-records v1";

std::string Label(Component c, crypto::KeyPurpose p) {
  return std::string(ComponentName(c)) + " " + std::string(crypto::KeyPurposeName(p)) + " key";
}

crypto::PrivateKey UnlockComm(const KeyStore& store, PassphraseReader& reader, Component c) {
  return store.Unlock(c, crypto::KeyPurpose::kCommunication,
                      reader.Read(Label(c, crypto::KeyPurpose::kCommunication)));
}

std::string SerializeRecords(const std::vector<credentials::CredentialRecord>& records) {
  std::string out = std::string(kRecordsHeader) + "\n";
  for (const auto& r : records) {
    out += "R\t" + r.voter_id + "\t" + Base64Encode(r.pw_hash.view()) + "\t" +
           Base64Encode(r.sig_ers.bytes) + "\t" + Base64Encode(r.sig_vs.bytes) + "\n";
  }
  return out;
}

std::vector<credentials::CredentialRecord> ParseRecords(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kRecordsHeader) {
    throw Error(ErrorCode::kMalformed, "not a credential records file");
  }
  std::vector<credentials::CredentialRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string part; std::getline(ls, part, '\t');) f.push_back(part);
    if (f.size() != 5 || f[0] != "R") throw Error(ErrorCode::kMalformed, "bad record line");
    credentials::CredentialRecord r;
    r.voter_id = f[1];
    r.pw_hash = crypto::Digest::FromBytes(Base64Decode(f[2]));
    r.sig_ers = {Base64Decode(f[3]), crypto::KeyPurpose::kCommunication};
    r.sig_vs = {Base64Decode(f[4]), crypto::KeyPurpose::kCommunication};
    records.push_back(std::move(r));
  }
  return records;
}

crypto::KdfParams KdfByName(const std::string& name) {
  if (name == "interactive") return crypto::KdfParams::Interactive();
  if (name == "fast") return crypto::KdfParams::Fast();
  throw Error(ErrorCode::kInvalidArgument, "kdf must be interactive or fast");
}

std::string Join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

}  // namespace

void Emit(const Common& common, const json& record, const std::string& text) {
  if (common.json) {
    std::cout << record.dump() << std::endl;
  } else {
    std::cout << text << std::endl;
  }
}

int Keygen(const Common& common, const fs::path& keys, const std::vector<std::string>& components,
           const std::string& kdf) {
  std::vector<Component> selected;
  if (components.empty() || (components.size() == 1 && components[0] == "all")) {
    selected.assign(kAllComponents.begin(), kAllComponents.end());
  } else {
    for (const auto& n : components) selected.push_back(ComponentFromName(n));
  }
  KeyStore store(keys);
  for (Component c : selected) CheckOverwrite(store.DirOf(c), common.force, common.yes);
  const crypto::KdfParams params = KdfByName(kdf);
  PassphraseReader reader(common.passphrase_fd);
  json written = json::array();
  for (Component c : selected) {
    crypto::ComponentPassphrases pp;
    pp.communication = reader.ReadNew(Label(c, crypto::KeyPurpose::kCommunication));
    pp.database = reader.ReadNew(Label(c, crypto::KeyPurpose::kDatabase));
    auto generated = crypto::GenerateComponentKeys(c, pp, std::nullopt, params);
    store.Write(c, generated);
    written.push_back({{"component", ComponentName(c)},
                       {"communication", generated.publics.communication.KeyId()},
                       {"database", generated.publics.database.KeyId()},
                       {"https", generated.publics.https.KeyId()}});
    Emit(common, written.back(),
         "keys written for " + std::string(ComponentName(c)) + " (communication " +
             generated.publics.communication.KeyId() + ")");
  }
  return kExitOk;
}

int OfficerHash(const Common& common, const std::string& kdf) {
  PassphraseReader reader(common.passphrase_fd);
  const std::string hash = committee::HashOfficerPassword(reader.ReadNew("officer password"), KdfByName(kdf));
  Emit(common, {{"password_hash", hash}}, hash);
  return kExitOk;
}

int CredentialsGenerate(const Common& common, std::size_t count, const fs::path& out,
                        std::optional<std::uint64_t> seed, std::size_t length) {
  CheckOverwrite(out, common.force, common.yes);
  if (count == 0) throw Error(ErrorCode::kInvalidArgument, "count must be positive");
  credentials::PasswordPolicy policy;
  policy.length = length;
  policy.Check();
  auto creds = credentials::GenerateCredentials(count, policy, seed);
  fs::remove(MarkerPath(out));
  WriteFileAtomic(out, credentials::ExportCredentials(creds).file);
  MarkComplete(out, kCredentialsStep);
  Emit(common, {{"credentials", count}, {"file", out.string()}},
       "generated " + std::to_string(count) + " credentials in " + out.string());
  return kExitOk;
}

int CredentialsSign(const Common& common, const fs::path& credentials, const fs::path& keys,
                    const fs::path& out) {
  RequireComplete(credentials, kCredentialsStep);
  CheckOverwrite(out, common.force, common.yes);
  auto creds = credentials::ImportCredentials(ReadFile(credentials));
  KeyStore store(keys);
  PassphraseReader reader(common.passphrase_fd);
  const auto ers = UnlockComm(store, reader, Component::kRegistry);
  const auto vs = UnlockComm(store, reader, Component::kValidator);
  std::vector<credentials::CredentialRecord> records;
  records.reserve(creds.size());
  for (const auto& c : creds) records.push_back(credentials::SignCredential(c, ers, vs));
  fs::remove(MarkerPath(out));
  WriteFileAtomic(out, SerializeRecords(records));
  MarkComplete(out, kSignStep);
  Emit(common, {{"records", records.size()}, {"file", out.string()}},
       "signed " + std::to_string(records.size()) + " credential records into " + out.string());
  return kExitOk;
}

int CredentialsExport(const Common& common, const fs::path& credentials, const fs::path& out_dir) {
  RequireComplete(credentials, kCredentialsStep);
  CheckOverwrite(out_dir, common.force, common.yes);
  auto creds = credentials::ImportCredentials(ReadFile(credentials));
  fs::remove(MarkerPath(out_dir));
  fs::remove_all(out_dir);
  fs::create_directories(out_dir);
  for (const auto& c : creds) {
    WriteFileAtomic(out_dir / (c.voter_id + ".txt"),
                    "Voter ID: " + c.voter_id + "\nPassword: " + c.password + "\n");
  }
  MarkComplete(out_dir, kExportStep);
  Emit(common, {{"letters", creds.size()}, {"directory", out_dir.string()}},
       "wrote " + std::to_string(creds.size()) + " credential letters to " + out_dir.string());
  return kExitOk;
}

int RegisterBuild(const Common& common, const fs::path& records, const fs::path& keys,
                  const fs::path& out) {
  RequireComplete(records, kSignStep);
  CheckOverwrite(out, common.force, common.yes);
  KeyStore store(keys);
  PassphraseReader reader(common.passphrase_fd);
  auto reg = credentials::BuildSignedRegister(ParseRecords(ReadFile(records)),
                                              UnlockComm(store, reader, Component::kRegistry));
  fs::remove(MarkerPath(out));
  WriteFileAtomic(out, credentials::SerializeRegister(reg));
  MarkComplete(out, kRegisterStep);
  Emit(common, {{"records", reg.records.size()}, {"file", out.string()}},
       "register with " + std::to_string(reg.records.size()) + " records written to " + out.string());
  return kExitOk;
}

int RegisterVerify(const Common& common, const fs::path& reg, const fs::path& keys) {
  KeyStore store(keys);
  auto report = credentials::VerifyRegisterFile(ReadFile(reg),
                                                store.Publics(Component::kRegistry).communication,
                                                store.Publics(Component::kValidator).communication);
  const auto flagged = report.FlaggedRecords();
  json j = {{"ok", report.ok()},
            {"records", report.entries.size()},
            {"register_signature_ok", report.register_signature_ok},
            {"flagged", flagged}};
  if (report.malformed) j["malformed"] = report.malformed_reason;
  std::string text = report.ok() ? "register verified: " + std::to_string(report.entries.size()) + " records"
                                 : "register verification FAILED";
  if (report.malformed) text += ": " + report.malformed_reason;
  if (!report.register_signature_ok && !report.malformed) text += "; register signature invalid";
  if (!flagged.empty()) text += "; flagged records: " + Join(flagged);
  Emit(common, j, text);
  return report.ok() ? kExitOk : kExitVerificationFailed;
}

int BaselineRecord(const Common& common, const fs::path& keys,
                   const std::vector<std::string>& artifacts, const fs::path& out) {
  CheckOverwrite(out, common.force, common.yes);
  std::map<std::string, fs::path> paths;
  for (const auto& a : artifacts) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::kInvalidArgument, "artifact must be name=path: " + a);
    }
    paths[a.substr(0, eq)] = fs::absolute(a.substr(eq + 1));
  }
  if (paths.empty()) throw Error(ErrorCode::kInvalidArgument, "no artifacts given");
  KeyStore store(keys);
  PassphraseReader reader(common.passphrase_fd);
  auto baseline = committee::RecordBaseline(paths, SystemClock().Now(),
                                            UnlockComm(store, reader, Component::kCommittee));
  fs::remove(MarkerPath(out));
  WriteFileAtomic(out, baseline.ToJson().dump(1) + "\n");
  MarkComplete(out, kBaselineStep);
  json digests = json::object();
  for (const auto& [name, a] : baseline.artifacts) digests[name] = a.digest.Hex();
  Emit(common, {{"artifacts", digests}, {"file", out.string()}},
       "baseline of " + std::to_string(paths.size()) + " artifacts written to " + out.string());
  return kExitOk;
}

int BaselineVerify(const Common& common, const fs::path& baseline, const fs::path& keys) {
  KeyStore store(keys);
  auto b = committee::SoftwareBaseline::FromJson(json::parse(ReadFile(baseline)));
  auto report = committee::VerifyBaseline(b, store.Publics(Component::kCommittee).communication);
  std::string text = report.ok() ? "software baseline verified" : "software baseline FAILED";
  if (!report.signature_ok) text += "; baseline signature invalid";
  const auto bad = report.Mismatches();
  if (!bad.empty()) text += "; changed: " + Join(bad);
  Emit(common, report.ToJson(), text);
  return report.ok() ? kExitOk : kExitVerificationFailed;
}

int Simulate(const Common& common, const fs::path& script_path, std::uint64_t seed,
             const std::string& mode, const std::optional<fs::path>& report_path) {
  json j;
  try {
    j = json::parse(ReadFile(script_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("script is not valid JSON: ") + e.what());
  }
  auto script = harness::ScenarioScript::FromJson(j);
  script.Check();
  harness::ScenarioOptions options;
  if (mode == "http") {
    options.mode = harness::TransportMode::kHttp;
  } else if (mode != "bus") {
    throw Error(ErrorCode::kInvalidArgument, "mode must be bus or http");
  }
  auto report = harness::RunScenario(script, {}, seed, options);
  if (report_path) WriteFileAtomic(*report_path, report.Serialize());

  std::ostringstream text;
  text << "scenario " << (script.name.empty() ? script_path.filename().string() : script.name)
       << ": " << report.total_votes << " votes\n";
  for (const auto& [contest, counts] : report.tally) {
    text << "  " << contest << ":";
    for (const auto& [option, n] : counts) text << " " << option << "=" << n;
    text << "\n";
  }
  text << "  tally signature " << (report.tally_signature_ok ? "ok" : "INVALID") << "\n";
  if (report.oracle.applicable) {
    text << "  oracle " << (report.tally_matches_oracle ? "matches" : "DIFFERS") << "\n";
  } else {
    text << "  oracle not applicable to this fault plan\n";
  }
  if (report.tally_matches_expected) {
    text << "  expected tally " << (*report.tally_matches_expected ? "matches" : "DIFFERS") << "\n";
  }
  for (const auto& [name, inv] : report.invariants) {
    if (!inv.ok) text << "  invariant " << name << " FAILED: " << inv.detail << "\n";
  }
  if (!report.error.empty()) text << "  error: " << report.error << "\n";
  text << (report.ok() ? "PASS" : "FAIL");
  Emit(common, report.ToJson(), text.str());
  return report.ok() ? kExitOk : kExitVerificationFailed;
}

int VerifyArchive(const Common& common, const fs::path& archive, const fs::path& keys) {
  KeyStore store(keys);
  const std::string bytes = ReadFile(archive);
  auto report = committee::VerifyArchive(AsBytes(bytes),
                                         store.Publics(Component::kCommittee).communication);
  json members = json::array();
  for (const auto& m : report.members) members.push_back(m.name);
  json j = {{"ok", report.ok}, {"members", members}, {"issues", report.issues}};
  if (!report.broken_member.empty()) j["broken_member"] = report.broken_member;
  std::string text;
  if (report.ok) {
    text = "archive verified: " + std::to_string(report.members.size()) + " members";
  } else {
    text = "archive verification FAILED";
    if (!report.broken_member.empty()) text += ": broken member " + report.broken_member;
    if (!report.issues.empty()) text += " (" + report.issues.front() + ")";
  }
  Emit(common, j, text);
  return report.ok ? kExitOk : kExitVerificationFailed;
}

int VerifyChain(const Common& common, const fs::path& store_path, const fs::path& keys,
                std::size_t block_size, bool sealed) {
  if (block_size == 0) throw Error(ErrorCode::kInvalidArgument, "block size must be positive");
  KeyStore store(keys);
  const std::string image = ReadFile(store_path);
  std::size_t valid = 0;
  auto records = DurableLog::ParseFrames(AsBytes(image), &valid);
  json j;
  bool ok = false;
  std::string text;
  try {
    auto chain = ballotbox::VoteChain::FromRecords(records);
    auto report = ballotbox::VerifyChain(chain, store.Publics(Component::kBallotBox).communication,
                                         block_size, sealed);
    j = report.ToJson();
    if (valid != image.size()) {
      j["torn_tail_bytes"] = image.size() - valid;
      j["issues"].push_back("store ends in a torn record");
    }
    ok = report.ok() && valid == image.size();
    text = ok ? "vote chain verified: " + std::to_string(chain.votes.size()) + " votes in " +
                    std::to_string(chain.blocks.size()) + " blocks"
              : "vote chain verification FAILED";
    for (const auto& issue : j["issues"]) text += "\n  " + issue.get<std::string>();
  } catch (const Error& e) {
    j = {{"issues", {e.what()}}};
    text = std::string("vote chain verification FAILED\n  ") + e.what();
  }
  j["ok"] = ok;
  Emit(common, j, text);
  return ok ? kExitOk : kExitVerificationFailed;
}

}  // namespace evote::cli
