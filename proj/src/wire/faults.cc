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

#include "evote/wire/faults.h"

#include "evote/common/error.h"
#include "evote/wire/codec.h"

namespace evote::wire {

std::string_view FaultKindName(FaultKind k) {
  switch (k) {
    case FaultKind::kCrash: return "crash";
    case FaultKind::kDelay: return "delay";
    case FaultKind::kDrop: return "drop";
    case FaultKind::kClockSkew: return "clock_skew";
  }
  return "unknown";
}

FaultKind FaultKindFromName(std::string_view name) {
  for (auto k : {FaultKind::kCrash, FaultKind::kDelay, FaultKind::kDrop, FaultKind::kClockSkew}) {
    if (FaultKindName(k) == name) return k;
  }
  throw Error(ErrorCode::kMalformed, "unknown fault kind");
}

Json Fault::ToJson() const {
  Json j{{"target", target}, {"step", step}, {"occurrence", occurrence},
         {"fault", FaultKindName(kind)}, {"amount_ms", amount}};
  if (component) j["component"] = ComponentName(*component);
  return j;
}

Fault Fault::FromJson(const Json& j) {
  Fault f;
  f.target = StringField(j, "target");
  f.kind = FaultKindFromName(StringField(j, "fault"));
  if (j.contains("step")) f.step = static_cast<int>(IntField(j, "step"));
  if (j.contains("occurrence")) f.occurrence = static_cast<int>(IntField(j, "occurrence"));
  if (j.contains("amount_ms")) f.amount = IntField(j, "amount_ms");
  if (j.contains("component")) f.component = ComponentFromName(StringField(j, "component"));
  return f;
}

void FaultInjector::SetPlan(FaultPlan plan) {
  std::lock_guard lock(mu_);
  plan_ = std::move(plan);
  used_.assign(plan_.size(), false);
  counters_.clear();
  fired_.clear();
}

std::optional<Fault> FaultInjector::Match(std::string_view target, int step, int occurrence) {
  used_.resize(plan_.size(), false);
  for (std::size_t i = 0; i < plan_.size(); ++i) {
    const Fault& f = plan_[i];
    if (used_[i] || f.target != target || f.occurrence != occurrence) continue;
    if (f.step >= 0 && f.step != step) continue;
    used_[i] = true;
    fired_.push_back(f);
    return f;
  }
  return std::nullopt;
}

std::optional<Fault> FaultInjector::OnMessage(std::string_view type) {
  std::lock_guard lock(mu_);
  if (plan_.empty()) return std::nullopt;
  auto it = counters_.find(type);
  if (it == counters_.end()) it = counters_.emplace(std::string(type), 0).first;
  return Match(type, -1, it->second++);
}

std::optional<Fault> FaultInjector::OnStep(std::string_view op, int step) {
  std::lock_guard lock(mu_);
  if (plan_.empty()) return std::nullopt;
  auto it = counters_.find(op);
  if (it == counters_.end()) it = counters_.emplace(std::string(op), -1).first;
  if (step == 0) ++it->second;
  return Match(op, step, it->second);
}

std::vector<Fault> FaultInjector::fired() const {
  std::lock_guard lock(mu_);
  return fired_;
}

}  // namespace evote::wire
