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

#include <signal.h>

#include <iostream>
#include <memory>

#include "commands.h"
#include "evote/ballotbox/ballotbox_service.h"
#include "evote/committee/committee_service.h"
#include "evote/common/error.h"
#include "evote/common/random.h"
#include "evote/credentials/signed_register.h"
#include "evote/harness/deployment.h"
#include "evote/harness/http_api.h"
#include "evote/registry/registry_service.h"
#include "evote/validator/validator_service.h"
#include "evote/wire/http.h"
#include "files.h"
#include "key_store.h"
#include "passphrase.h"

namespace evote::cli {
namespace {

std::pair<std::string, int> SplitAddress(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw Error(ErrorCode::kInvalidArgument, "address must be host:port: " + address);
  }
  try {
    return {address.substr(0, colon), std::stoi(address.substr(colon + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "bad port in " + address);
  }
}

}  // namespace

int Serve(const Common& common, const ServeOptions& o) {
  const Component self = ComponentFromName(o.component);
  nlohmann::json config_json;
  try {
    config_json = nlohmann::json::parse(ReadFile(o.config));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("config is not valid JSON: ") + e.what());
  }
  auto config = harness::ElectionConfig::FromJson(config_json);
  config.Check();
  const auto [host, port] = SplitAddress(o.bind);

  KeyStore store(o.keys);
  const crypto::KeyDirectory directory = store.Directory();
  crypto::Keyring keyring(store.Load(self));
  SystemClock clock;
  SystemRandom rng;
  wire::HttpTransport transport(self, keyring, directory, clock);
  for (const auto& p : o.peers) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kInvalidArgument, "peer must be name=host:port");
    SplitAddress(p.substr(eq + 1));
    transport.SetPeer(ComponentFromName(p.substr(0, eq)), p.substr(eq + 1));
  }
  std::filesystem::create_directories(o.data);

  std::unique_ptr<wire::ServiceBase> service;
  std::function<void()> poll;
  std::function<void(wire::HttpEndpoint&)> routes = [](wire::HttpEndpoint&) {};
  switch (self) {
    case Component::kValidator: {
      auto vs = std::make_unique<validator::ValidatorService>(
          keyring, directory, clock, validator::ValidatorConfig{config.session_expiry}, o.data);
      poll = [s = vs.get()] { s->Poll(); };
      service = std::move(vs);
      break;
    }
    case Component::kRegistry: {
      if (!o.register_file) throw Error(ErrorCode::kInvalidArgument, "serve ers needs --register");
      const std::string text = ReadFile(*o.register_file);
      auto report = credentials::VerifyRegisterFile(text, directory.at(Component::kRegistry).communication,
                                                    directory.at(Component::kValidator).communication);
      if (!report.ok()) throw Error(ErrorCode::kVerificationFailed, "electoral register does not verify");
      registry::RegistryConfig rc;
      rc.session_expiry = config.session_expiry;
      auto ers = std::make_unique<registry::RegistryService>(
          keyring, directory, credentials::ParseRegister(text), clock, transport, rng, rc, o.data);
      poll = [s = ers.get()] { s->Poll(); };
      routes = [s = ers.get()](wire::HttpEndpoint& e) { harness::InstallRegistryRoutes(e, *s); };
      service = std::move(ers);
      break;
    }
    case Component::kBallotBox: {
      auto bbs = std::make_unique<ballotbox::BallotBoxService>(
          keyring, directory, config.ballot, clock, transport,
          ballotbox::BallotBoxConfig{config.block_size}, o.data);
      poll = [s = bbs.get()] { s->Poll(); };
      routes = [s = bbs.get()](wire::HttpEndpoint& e) { harness::InstallBallotBoxRoutes(e, *s); };
      service = std::move(bbs);
      break;
    }
    case Component::kCommittee: {
      const crypto::KdfParams kdf =
          o.kdf == "fast" ? crypto::KdfParams::Fast() : crypto::KdfParams::Interactive();
      committee::CommitteeConfig cc;
      cc.threshold = config.threshold;
      for (const auto& officer : config.officers) {
        cc.officers.push_back({officer.officer_id,
                               officer.password_hash.empty()
                                   ? committee::HashOfficerPassword(officer.password, kdf)
                                   : officer.password_hash});
      }
      cc.low_turnout_threshold = config.low_turnout_threshold;
      cc.grace_period = config.grace_period;
      cc.selftest_interval = config.selftest_interval;
      auto cs = std::make_unique<committee::CommitteeService>(
          keyring, directory, config.ballot, clock, transport, rng, cc, o.data);
      PassphraseReader reader(common.passphrase_fd);
      const std::string comm = reader.Read("committee communication key");
      const std::string db = reader.Read("committee database key");
      cs->Start(comm, db);
      poll = [s = cs.get()] { s->Poll(); };
      routes = [s = cs.get()](wire::HttpEndpoint& e) { harness::InstallCommitteeRoutes(e, *s); };
      service = std::move(cs);
      break;
    }
  }

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  wire::HttpEndpoint endpoint(self, *service, keyring, directory, clock, service->audit());
  const int bound = endpoint.Bind(host, port);
  routes(endpoint);
  endpoint.Start();
  const std::string address = host + ":" + std::to_string(bound);
  Emit(common, {{"component", ComponentName(self)}, {"address", address}},
       std::string(ComponentName(self)) + " listening on " + address);

  const timespec tick{0, 200'000'000};
  for (;;) {
    const int sig = sigtimedwait(&signals, nullptr, &tick);
    if (sig == SIGINT || sig == SIGTERM) break;
    try {
      poll();
    } catch (const Error& e) {
      std::cerr << "poll: " << e.what() << std::endl;
    }
  }
  endpoint.Stop();
  Emit(common, {{"component", ComponentName(self)}, {"stopped", true}},
       std::string(ComponentName(self)) + " stopped");
  return kExitOk;
}

}  // namespace evote::cli
