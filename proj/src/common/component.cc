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

#include "evote/common/component.h"

#include <string>

#include "evote/common/error.h"

namespace evote {

std::string_view ComponentName(Component c) {
  switch (c) {
    case Component::kRegistry: return "ers";
    case Component::kValidator: return "vs";
    case Component::kBallotBox: return "bbs";
    case Component::kCommittee: return "committee";
  }
  return "unknown";
}

Component ComponentFromName(std::string_view name) {
  for (Component c : kAllComponents) {
    if (ComponentName(c) == name) return c;
  }
  throw Error(ErrorCode::kMalformed, "unknown component: " + std::string(name));
}

}  // namespace evote
