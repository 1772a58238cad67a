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

#ifndef EVOTE_WIRE_TRANSPORT_H_
#define EVOTE_WIRE_TRANSPORT_H_

#include <string_view>

#include <json.hpp>

#include "evote/common/component.h"

namespace evote::wire {

using Json = nlohmann::json;

// Outgoing side of a component: sends a signed request and returns the
// verified response body. Remote failures are rethrown as evote::Error
// carrying the remote error code; transport failures as kUnavailable.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual Json Call(Component to, std::string_view type, const Json& body) = 0;
};

// Incoming side of a component. `from` has already been authenticated by
// the envelope signature.
class MessageHandler {
 public:
  virtual ~MessageHandler() = default;
  virtual Json Handle(Component from, std::string_view type, const Json& body) = 0;
};

// Message types a component may answer before its communication key is
// unlocked; those envelopes are signed with the https key instead.
bool IsBootstrapMessage(std::string_view type);

}  // namespace evote::wire

#endif  // EVOTE_WIRE_TRANSPORT_H_
