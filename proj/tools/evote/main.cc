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

#include <CLI11.hpp>

#include <iostream>

#include "commands.h"
#include "evote/common/error.h"

namespace {

using evote::cli::Common;

int ExitCodeFor(evote::ErrorCode code) {
  switch (code) {
    case evote::ErrorCode::kVerificationFailed:
    case evote::ErrorCode::kCorrupted:
    case evote::ErrorCode::kWrongKey:
      return evote::cli::kExitVerificationFailed;
    default:
      return evote::cli::kExitUsage;
  }
}

void ReportError(const Common& common, std::string_view code, const std::string& message) {
  if (common.json) {
    std::cout << nlohmann::json{{"error", {{"code", code}, {"message", message}}}}.dump() << std::endl;
  } else {
    std::cerr << "error: " << message << std::endl;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Remote electronic voting: key ceremony, services and verification"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  int passphrase_fd = -1;
  app.add_flag("--json", common.json, "Print structured records");
  app.add_flag("--force", common.force, "Replace existing outputs");
  app.add_flag("--yes", common.yes, "Confirm a destructive action");
  app.add_option("--passphrase-fd", passphrase_fd,
                 "Read passphrases from this descriptor, one per line");

  std::filesystem::path keys = "keys";
  auto add_keys = [&](CLI::App* cmd) {
    cmd->add_option("--keys", keys, "Key directory")->capture_default_str();
  };

  std::function<int()> run;

  std::vector<std::string> components;
  std::string kdf = "interactive";
  auto* keygen = app.add_subcommand("keygen", "Generate the three key pairs of each component");
  add_keys(keygen);
  keygen->add_option("--component", components, "ers, vs, bbs, committee or all (default all)");
  keygen->add_option("--kdf", kdf, "Passphrase KDF cost: interactive or fast")->capture_default_str();
  keygen->callback([&] { run = [&] { return evote::cli::Keygen(common, keys, components, kdf); }; });

  auto* officer = app.add_subcommand("officer-hash", "Hash an officer password for the config file");
  officer->add_option("--kdf", kdf, "interactive or fast")->capture_default_str();
  officer->callback([&] { run = [&] { return evote::cli::OfficerHash(common, kdf); }; });

  auto* creds = app.add_subcommand("credentials", "Voter credentials");
  creds->require_subcommand(1);
  std::size_t count = 0;
  std::size_t length = 12;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out;
  std::filesystem::path credentials_file;
  auto* gen = creds->add_subcommand("generate", "Generate voter ids and passwords");
  gen->add_option("--count", count, "Number of voters")->required();
  gen->add_option("--out", out, "Credentials file")->required();
  gen->add_option("--length", length, "Password length")->capture_default_str();
  gen->add_option("--seed", seed, "Deterministic generation, for test ceremonies only");
  gen->callback([&] {
    run = [&] { return evote::cli::CredentialsGenerate(common, count, out, seed, length); };
  });
  auto* sign = creds->add_subcommand("sign", "Sign credential hashes with the ers and vs keys");
  add_keys(sign);
  sign->add_option("--credentials", credentials_file, "Credentials file")->required();
  sign->add_option("--out", out, "Signed records file")->required();
  sign->callback([&] {
    run = [&] { return evote::cli::CredentialsSign(common, credentials_file, keys, out); };
  });
  auto* exp = creds->add_subcommand("export", "Write one credential letter per voter");
  exp->add_option("--credentials", credentials_file, "Credentials file")->required();
  exp->add_option("--out", out, "Output directory")->required();
  exp->callback([&] {
    run = [&] { return evote::cli::CredentialsExport(common, credentials_file, out); };
  });

  auto* reg = app.add_subcommand("register", "Electoral register");
  reg->require_subcommand(1);
  std::filesystem::path records;
  std::filesystem::path register_file;
  auto* build = reg->add_subcommand("build", "Sign the register with the ers key");
  add_keys(build);
  build->add_option("--records", records, "Signed records file")->required();
  build->add_option("--out", out, "Register file")->required();
  build->callback([&] { run = [&] { return evote::cli::RegisterBuild(common, records, keys, out); }; });
  auto* rverify = reg->add_subcommand("verify", "Verify every record and the register signature");
  add_keys(rverify);
  rverify->add_option("--register", register_file, "Register file")->required();
  rverify->callback([&] { run = [&] { return evote::cli::RegisterVerify(common, register_file, keys); }; });

  auto* baseline = app.add_subcommand("baseline", "Software baseline");
  baseline->require_subcommand(1);
  std::vector<std::string> artifacts;
  std::filesystem::path baseline_file;
  auto* brecord = baseline->add_subcommand("record", "Record signed digests of deployed artifacts");
  add_keys(brecord);
  brecord->add_option("--artifact", artifacts, "name=path, repeatable")->required();
  brecord->add_option("--out", out, "Baseline file")->required();
  brecord->callback([&] {
    run = [&] { return evote::cli::BaselineRecord(common, keys, artifacts, out); };
  });
  auto* bverify = baseline->add_subcommand("verify", "Re-hash the artifacts of a baseline");
  add_keys(bverify);
  bverify->add_option("--baseline", baseline_file, "Baseline file")->required();
  bverify->callback([&] { run = [&] { return evote::cli::BaselineVerify(common, baseline_file, keys); }; });

  evote::cli::ServeOptions serve_opts;
  auto* serve = app.add_subcommand("serve", "Run one component over HTTP until SIGINT or SIGTERM");
  serve->add_option("component", serve_opts.component, "ers, vs, bbs or committee")
      ->required()
      ->check(CLI::IsMember({"ers", "vs", "bbs", "committee"}));
  serve->add_option("--config", serve_opts.config, "Election config file")->required();
  serve->add_option("--keys", serve_opts.keys, "Key directory")->required();
  serve->add_option("--data", serve_opts.data, "Data directory")->required();
  serve->add_option("--register", serve_opts.register_file, "Signed register (ers)");
  serve->add_option("--bind", serve_opts.bind, "host:port, port 0 picks one")->capture_default_str();
  serve->add_option("--peer", serve_opts.peers, "name=host:port, repeatable");
  serve->add_option("--kdf", serve_opts.kdf, "Officer password hashing cost")
      ->check(CLI::IsMember({"interactive", "fast"}));
  serve->callback([&] { run = [&] { return evote::cli::Serve(common, serve_opts); }; });

  std::filesystem::path script;
  std::uint64_t sim_seed = 1;
  std::string mode = "bus";
  std::optional<std::filesystem::path> report;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario script and check it against the oracle");
  simulate->add_option("script", script, "Scenario script")->required();
  simulate->add_option("--seed", sim_seed, "Simulation seed")->capture_default_str();
  simulate->add_option("--mode", mode, "bus or http")->capture_default_str()->check(CLI::IsMember({"bus", "http"}));
  simulate->add_option("--report", report, "Write the full report here");
  simulate->callback([&] {
    run = [&] { return evote::cli::Simulate(common, script, sim_seed, mode, report); };
  });

  std::filesystem::path archive;
  auto* varchive = app.add_subcommand("verify-archive", "Verify a signed election archive");
  varchive->add_option("file", archive, "Archive file")->required();
  add_keys(varchive);
  varchive->callback([&] { run = [&] { return evote::cli::VerifyArchive(common, archive, keys); }; });

  std::filesystem::path chain_store;
  std::size_t block_size = 30;
  bool sealed = false;
  auto* vchain = app.add_subcommand("verify-chain", "Verify the ballot box vote store");
  vchain->add_option("store", chain_store, "votes.log of the ballot box")->required();
  add_keys(vchain);
  vchain->add_option("--block-size", block_size, "Votes per block")->capture_default_str();
  vchain->add_flag("--sealed", sealed, "Require every vote to be in a sealed block");
  vchain->callback([&] {
    run = [&] { return evote::cli::VerifyChain(common, chain_store, keys, block_size, sealed); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    ReportError(common, "usage", e.what());
    return evote::cli::kExitUsage;
  }
  if (passphrase_fd >= 0) common.passphrase_fd = passphrase_fd;
  try {
    return run();
  } catch (const evote::Error& e) {
    ReportError(common, evote::ErrorCodeName(e.code()), e.what());
    return ExitCodeFor(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    ReportError(common, "io", e.what());
    return evote::cli::kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    ReportError(common, "malformed", e.what());
    return evote::cli::kExitUsage;
  }
}
