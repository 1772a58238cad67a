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

#ifndef EVOTE_WIRE_FAULTS_H_
#define EVOTE_WIRE_FAULTS_H_

#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "evote/common/clock.h"
#include "evote/wire/transport.h"

namespace evote::wire {

enum class FaultKind { kCrash, kDelay, kDrop, kClockSkew };
std::string_view FaultKindName(FaultKind k);
FaultKind FaultKindFromName(std::string_view name);

// A fault fires at the `occurrence`-th use (0-based) of `target`. Targets
// are message types, or an internal operation such as "confirm_vote" whose
// `step` names the step boundary index inside it.
struct Fault {
  std::string target;
  int step = -1;
  int occurrence = 0;
  FaultKind kind = FaultKind::kCrash;
  Millis amount = 0;  // delay or skew, ms
  std::optional<Component> component;  // clock_skew target; default recipient

  Json ToJson() const;
  static Fault FromJson(const Json& j);
};

using FaultPlan = std::vector<Fault>;

// Thrown at an injected crash point. Not an evote::Error, so no handler
// converts it into an ordinary error reply.
class CrashSignal : public std::runtime_error {
 public:
  explicit CrashSignal(const std::string& where) : std::runtime_error("crash at " + where) {}
};

class FaultInjector {
 public:
  FaultInjector() = default;
  explicit FaultInjector(FaultPlan plan) : plan_(std::move(plan)) {}

  void SetPlan(FaultPlan plan);
  // Counts one delivery of `type` and returns the fault due for it.
  std::optional<Fault> OnMessage(std::string_view type);
  // Step boundary `step` of `op`. Step 0 starts a new occurrence.
  std::optional<Fault> OnStep(std::string_view op, int step);
  std::vector<Fault> fired() const;

 private:
  std::optional<Fault> Match(std::string_view target, int step, int occurrence);

  mutable std::mutex mu_;
  FaultPlan plan_;
  std::vector<bool> used_;
  std::map<std::string, int, std::less<>> counters_;
  std::vector<Fault> fired_;
};

}  // namespace evote::wire

#endif  // EVOTE_WIRE_FAULTS_H_
