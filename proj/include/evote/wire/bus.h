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

#ifndef EVOTE_WIRE_BUS_H_
#define EVOTE_WIRE_BUS_H_

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>

#include "evote/common/clock.h"
#include "evote/crypto/keyring.h"
#include "evote/wire/envelope.h"
#include "evote/wire/faults.h"
#include "evote/wire/transport.h"

namespace evote::wire {

// In-process delivery between the four components. Every request and
// response is signed by its sender and verified by its receiver; a
// delivery that fails verification is counted and refused.
class Bus {
 public:
  // `sim` is advanced by delay faults when given.
  explicit Bus(SimClock* sim = nullptr);
  ~Bus();
  Bus(const Bus&) = delete;
  Bus& operator=(const Bus&) = delete;

  // `clock` is the component's own (possibly skewed) view of time.
  void Attach(Component c, MessageHandler& handler, const crypto::Keyring& keyring,
              const crypto::KeyDirectory& directory, SkewedClock& clock);
  void Detach(Component c);
  Transport& TransportFor(Component c);

  void SetDown(Component c, bool down);
  bool IsDown(Component c) const;
  // Runs when an injected fault crashes a component; the component is
  // already marked down.
  void SetCrashHandler(std::function<void(Component)> handler);

  FaultInjector& faults() { return faults_; }

  // Signs nothing: delivers an already signed request and returns the
  // signed response. Exposed for tests of the verification path.
  WireEnvelope Deliver(const WireEnvelope& request);

  std::int64_t delivered() const { return delivered_.load(); }
  std::int64_t rejected() const { return rejected_.load(); }

 private:
  struct Node;
  class NodeTransport;

  Node& NodeFor(Component c) const;
  void Crash(Component c);

  SimClock* sim_;
  mutable std::mutex mu_;
  std::map<Component, std::unique_ptr<Node>> nodes_;
  std::map<Component, std::unique_ptr<NodeTransport>> transports_;
  std::function<void(Component)> crash_handler_;
  FaultInjector faults_;
  std::atomic<std::int64_t> delivered_{0};
  std::atomic<std::int64_t> rejected_{0};
};

}  // namespace evote::wire

#endif  // EVOTE_WIRE_BUS_H_
