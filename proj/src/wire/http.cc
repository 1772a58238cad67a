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

#include "evote/wire/http.h"

#include <httplib.h>

#include "evote/common/error.h"
#include "evote/wire/faults.h"

namespace evote::wire {
namespace {

constexpr char kJson[] = "application/json";

void SendError(httplib::Response& res, const Error& e) {
  res.status = HttpStatusFor(e.code());
  res.set_content(ErrorBody(e).dump(), kJson);
}

}  // namespace

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kMalformed:
      return 400;
    case ErrorCode::kWrongPassphrase:
    case ErrorCode::kVerificationFailed:
    case ErrorCode::kReplay:
      return 401;
    case ErrorCode::kPermissionDenied:
      return 403;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kAlreadyExists:
    case ErrorCode::kIllegalState:
      return 409;
    case ErrorCode::kBusy:
      return 429;
    case ErrorCode::kUnavailable:
    case ErrorCode::kTransport:
      return 503;
    default:
      return 500;
  }
}

HttpEndpoint::HttpEndpoint(Component self, MessageHandler& handler,
                           const crypto::Keyring& keyring, const crypto::KeyDirectory& directory,
                           const Clock& clock, AuditLog& audit)
    : self_(self),
      handler_(handler),
      keyring_(keyring),
      clock_(clock),
      audit_(audit),
      verifier_(self, directory, clock),
      server_(std::make_unique<httplib::Server>()) {
  server_->set_payload_max_length(64 << 20);
  Install();
}

HttpEndpoint::~HttpEndpoint() { Stop(); }

httplib::Server& HttpEndpoint::server() { return *server_; }

void HttpEndpoint::Install() {
  server_->Post(kMessagePath, [this](const httplib::Request& req, httplib::Response& res) {
    WireEnvelope request;
    try {
      request = WireEnvelope::FromJson(Json::parse(req.body));
      request.signature.bytes = Base64Decode(req.get_header_value(kSignatureHeader));
    } catch (const std::exception&) {
      audit_.Record(AuditCategory::kMalfunction, {{"event", "malformed_request"}});
      SendError(res, Error(ErrorCode::kMalformed, "malformed envelope"));
      return;
    }
    try {
      WireEnvelope reply = Dispatch(request, handler_, verifier_, keyring_, clock_);
      res.set_header(kSignatureHeader, Base64Encode(reply.signature.bytes));
      res.set_content(reply.ToJson(false).dump(), kJson);
    } catch (const CrashSignal&) {
      SendError(res, Error(ErrorCode::kUnavailable, "recipient crashed"));
    } catch (const Error& e) {
      SendError(res, e);
    }
  });
  Get(kHealthPath, [this](const httplib::Request&, const Json&) {
    return handler_.Handle(Component::kCommittee, "health", Json::object());
  });
}

void HttpEndpoint::Post(const std::string& path, JsonRoute route) {
  server_->Post(path, [this, route = std::move(route)](const httplib::Request& req,
                                                       httplib::Response& res) {
    Json body;
    try {
      body = req.body.empty() ? Json::object() : Json::parse(req.body);
      if (!body.is_object()) throw Error(ErrorCode::kMalformed, "body must be an object");
    } catch (const std::exception&) {
      audit_.Record(AuditCategory::kMalfunction, {{"event", "malformed_request"}});
      SendError(res, Error(ErrorCode::kMalformed, "malformed JSON body"));
      return;
    }
    try {
      res.set_content(route(req, body).dump(), kJson);
    } catch (const Error& e) {
      SendError(res, e);
    } catch (const nlohmann::json::exception&) {
      audit_.Record(AuditCategory::kMalfunction, {{"event", "malformed_request"}});
      SendError(res, Error(ErrorCode::kMalformed, "malformed JSON body"));
    } catch (const CrashSignal&) {
      SendError(res, Error(ErrorCode::kUnavailable, "component crashed"));
    }
  });
}

void HttpEndpoint::Get(const std::string& path, JsonRoute route) {
  server_->Get(path, [route = std::move(route)](const httplib::Request& req,
                                                httplib::Response& res) {
    try {
      res.set_content(route(req, Json::object()).dump(), kJson);
    } catch (const Error& e) {
      SendError(res, e);
    }
  });
}

int HttpEndpoint::Bind(const std::string& host, int port) {
  if (port == 0) {
    int bound = server_->bind_to_any_port(host);
    if (bound <= 0) throw Error(ErrorCode::kIo, "cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpEndpoint::Start() {
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void HttpEndpoint::Run() { server_->listen_after_bind(); }

void HttpEndpoint::Stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

HttpTransport::HttpTransport(Component self, const crypto::Keyring& keyring,
                             const crypto::KeyDirectory& directory, const Clock& clock)
    : self_(self), keyring_(keyring), clock_(clock), verifier_(self, directory, clock) {}

void HttpTransport::SetPeer(Component c, const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorCode::kInvalidArgument, "address is host:port");
  std::lock_guard lock(mu_);
  peers_[c] = {address.substr(0, colon), std::stoi(address.substr(colon + 1))};
}

Json HttpTransport::Call(Component to, std::string_view type, const Json& body) {
  std::pair<std::string, int> peer;
  {
    std::lock_guard lock(mu_);
    auto it = peers_.find(to);
    if (it == peers_.end()) throw Error(ErrorCode::kUnavailable, "unknown recipient");
    peer = it->second;
  }
  WireEnvelope env;
  env.sender = self_;
  env.recipient = to;
  env.type = std::string(type);
  env.body = body;
  env.nonce = NewNonce();
  env.timestamp = clock_.Now();
  SignEnvelope(env, keyring_);

  httplib::Client client(peer.first, peer.second);
  client.set_connection_timeout(5);
  client.set_read_timeout(30);
  httplib::Headers headers{{kSignatureHeader, Base64Encode(env.signature.bytes)}};
  auto res = client.Post(kMessagePath, headers, env.ToJson(false).dump(), kJson);
  if (!res) throw Error(ErrorCode::kUnavailable, "recipient unreachable");
  if (!res->has_header(kSignatureHeader)) {
    // Transport-level refusal before dispatch; no signed reply exists.
    Json err = Json::parse(res->body, nullptr, false);
    if (err.is_object()) RethrowIfError(err);
    throw Error(ErrorCode::kTransport, "unsigned reply");
  }
  WireEnvelope reply;
  try {
    reply = WireEnvelope::FromJson(Json::parse(res->body));
    reply.signature.bytes = Base64Decode(res->get_header_value(kSignatureHeader));
  } catch (const std::exception&) {
    throw Error(ErrorCode::kTransport, "malformed reply");
  }
  if (reply.reply_to != env.nonce || reply.sender != to) {
    throw Error(ErrorCode::kVerificationFailed, "reply does not match request");
  }
  verifier_.Verify(reply);
  RethrowIfError(reply.body);
  return reply.body;
}

}  // namespace evote::wire
