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

#ifndef EVOTE_COMMON_COMPONENT_H_
#define EVOTE_COMMON_COMPONENT_H_

#include <array>
#include <string_view>

namespace evote {

// The four cooperating services.
enum class Component {
  kRegistry,   // electoral register server (ERS)
  kValidator,  // validator (VS)
  kBallotBox,  // ballot box (BBS)
  kCommittee,  // committee tool
};

inline constexpr std::array<Component, 4> kAllComponents = {
    Component::kRegistry, Component::kValidator, Component::kBallotBox,
    Component::kCommittee};

std::string_view ComponentName(Component c);
Component ComponentFromName(std::string_view name);

}  // namespace evote

#endif  // EVOTE_COMMON_COMPONENT_H_
