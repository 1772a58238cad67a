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

#ifndef EVOTE_WIRE_HTTP_H_
#define EVOTE_WIRE_HTTP_H_

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "evote/common/audit.h"
#include "evote/common/clock.h"
#include "evote/crypto/keyring.h"
#include "evote/wire/envelope.h"
#include "evote/wire/transport.h"

namespace httplib {
class Server;
struct Request;
struct Response;
}  // namespace httplib

namespace evote::wire {

inline constexpr char kMessagePath[] = "/v1/internal/message";
inline constexpr char kHealthPath[] = "/v1/health";
inline constexpr char kSignatureHeader[] = "X-Evote-Signature";
inline constexpr char kSessionHeader[] = "X-Evote-Session";

int HttpStatusFor(ErrorCode code);

// JSON route handler: returns the response body or throws evote::Error.
using JsonRoute = std::function<Json(const httplib::Request& req, const Json& body)>;

// The network face of one component. Serves the signed internal message
// endpoint, a health endpoint and any JSON routes added by the caller.
// Unparseable bodies are answered with 400 and audited without content.
class HttpEndpoint {
 public:
  HttpEndpoint(Component self, MessageHandler& handler, const crypto::Keyring& keyring,
               const crypto::KeyDirectory& directory, const Clock& clock, AuditLog& audit);
  ~HttpEndpoint();
  HttpEndpoint(const HttpEndpoint&) = delete;
  HttpEndpoint& operator=(const HttpEndpoint&) = delete;

  // `get` routes ignore the body.
  void Post(const std::string& path, JsonRoute route);
  void Get(const std::string& path, JsonRoute route);
  httplib::Server& server();

  // Port 0 picks a free port. Returns the bound port; throws kIo.
  int Bind(const std::string& host, int port);
  void Start();
  // Blocks serving on the bound socket.
  void Run();
  void Stop();

 private:
  void Install();

  Component self_;
  MessageHandler& handler_;
  const crypto::Keyring& keyring_;
  const Clock& clock_;
  AuditLog& audit_;
  EnvelopeVerifier verifier_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

// Transport that posts signed envelopes to peers' internal endpoints.
class HttpTransport final : public Transport {
 public:
  HttpTransport(Component self, const crypto::Keyring& keyring,
                const crypto::KeyDirectory& directory, const Clock& clock);

  // `address` is "host:port".
  void SetPeer(Component c, const std::string& address);
  Json Call(Component to, std::string_view type, const Json& body) override;

 private:
  Component self_;
  const crypto::Keyring& keyring_;
  const Clock& clock_;
  EnvelopeVerifier verifier_;
  std::mutex mu_;
  std::map<Component, std::pair<std::string, int>> peers_;
};

}  // namespace evote::wire

#endif  // EVOTE_WIRE_HTTP_H_
