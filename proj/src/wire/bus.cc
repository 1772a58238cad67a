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

#include "evote/wire/bus.h"

#include "evote/common/error.h"

namespace evote::wire {

struct Bus::Node {
  Node(Component c, MessageHandler& h, const crypto::Keyring& k, const crypto::KeyDirectory& d,
       SkewedClock& clk)
      : handler(h), keyring(k), clock(clk), verifier(c, d, clk) {}
  MessageHandler& handler;
  const crypto::Keyring& keyring;
  SkewedClock& clock;
  EnvelopeVerifier verifier;
  std::atomic<bool> down{false};
};

class Bus::NodeTransport final : public Transport {
 public:
  NodeTransport(Bus& bus, Component self) : bus_(bus), self_(self) {}

  Json Call(Component to, std::string_view type, const Json& body) override {
    Node& me = bus_.NodeFor(self_);
    WireEnvelope env;
    env.sender = self_;
    env.recipient = to;
    env.type = std::string(type);
    env.body = body;
    env.nonce = NewNonce();
    env.timestamp = me.clock.Now();
    SignEnvelope(env, me.keyring);
    WireEnvelope reply = bus_.Deliver(env);
    if (reply.reply_to != env.nonce || reply.sender != to) {
      throw Error(ErrorCode::kVerificationFailed, "reply does not match request");
    }
    try {
      me.verifier.Verify(reply);
    } catch (const Error&) {
      ++bus_.rejected_;
      throw;
    }
    RethrowIfError(reply.body);
    return reply.body;
  }

 private:
  Bus& bus_;
  Component self_;
};

Bus::Bus(SimClock* sim) : sim_(sim) {}
Bus::~Bus() = default;

void Bus::Attach(Component c, MessageHandler& handler, const crypto::Keyring& keyring,
                 const crypto::KeyDirectory& directory, SkewedClock& clock) {
  std::lock_guard lock(mu_);
  nodes_[c] = std::make_unique<Node>(c, handler, keyring, directory, clock);
  if (!transports_.contains(c)) transports_[c] = std::make_unique<NodeTransport>(*this, c);
}

void Bus::Detach(Component c) {
  std::lock_guard lock(mu_);
  nodes_.erase(c);
}

Transport& Bus::TransportFor(Component c) {
  std::lock_guard lock(mu_);
  auto& t = transports_[c];
  if (!t) t = std::make_unique<NodeTransport>(*this, c);
  return *t;
}

Bus::Node& Bus::NodeFor(Component c) const {
  std::lock_guard lock(mu_);
  auto it = nodes_.find(c);
  if (it == nodes_.end()) throw Error(ErrorCode::kUnavailable, "component not attached");
  return *it->second;
}

void Bus::SetDown(Component c, bool down) { NodeFor(c).down = down; }

bool Bus::IsDown(Component c) const {
  try {
    return NodeFor(c).down.load();
  } catch (const Error&) {
    return true;
  }
}

void Bus::SetCrashHandler(std::function<void(Component)> handler) {
  std::lock_guard lock(mu_);
  crash_handler_ = std::move(handler);
}

void Bus::Crash(Component c) {
  SetDown(c, true);
  std::function<void(Component)> handler;
  {
    std::lock_guard lock(mu_);
    handler = crash_handler_;
  }
  if (handler) handler(c);
}

WireEnvelope Bus::Deliver(const WireEnvelope& request) {
  if (auto fault = faults_.OnMessage(request.type)) {
    switch (fault->kind) {
      case FaultKind::kDrop:
        throw Error(ErrorCode::kUnavailable, "message dropped");
      case FaultKind::kDelay:
        if (sim_ != nullptr) sim_->Advance(fault->amount);
        break;
      case FaultKind::kCrash:
        Crash(request.recipient);
        throw Error(ErrorCode::kUnavailable, "recipient crashed");
      case FaultKind::kClockSkew:
        NodeFor(fault->component.value_or(request.recipient)).clock.SetSkew(fault->amount);
        break;
    }
  }
  Node& node = NodeFor(request.recipient);
  if (node.down) throw Error(ErrorCode::kUnavailable, "recipient down");

  try {
    bool rejected = false;
    WireEnvelope reply = Dispatch(request, node.handler, node.verifier, node.keyring, node.clock,
                                  &rejected);
    ++(rejected ? rejected_ : delivered_);
    return reply;
  } catch (const CrashSignal&) {
    ++delivered_;
    Crash(request.recipient);
    throw Error(ErrorCode::kUnavailable, "recipient crashed");
  }
}

}  // namespace evote::wire
