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

#ifndef EVOTE_REGISTRY_KEYBOARD_H_
#define EVOTE_REGISTRY_KEYBOARD_H_

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "evote/common/bytes.h"
#include "evote/common/random.h"

namespace evote::registry {

// Screen rectangle in pixels. Left/top edges are inclusive, right/bottom
// edges exclusive.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool Contains(int px, int py) const {
    return px >= x && px < x + w && py >= y && py < y + h;
  }
  bool Intersects(const Rect& o) const {
    return x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h;
  }
};

struct KeyRegion {
  Rect rect;
  char character = 0;
};

struct Click {
  int x = 0;
  int y = 0;
};

// Image-map keyboard: one 48x48 px cell per alphabet character in a grid of
// ten columns, with as many rows as the alphabet needs. Adjacent cells share
// edges; unused cells of the last row and everything outside the grid are
// dead space. The character-to-cell assignment is shuffled for every login
// attempt.
struct KeyboardLayout {
  std::vector<KeyRegion> regions;
  Bytes nonce;

  static constexpr int kColumns = 10;
  static constexpr int kCellSize = 48;

  static KeyboardLayout Shuffled(std::string_view alphabet, RandomSource& rng);

  const KeyRegion* RegionFor(char c) const;
  // Throws kInvalidArgument ("invalid click") for a click in dead space.
  char Decode(const Click& click) const;
  std::string Decode(const std::vector<Click>& clicks) const;

  // Center of the region for `c`; what a browser would send.
  Click CenterOf(char c) const;
  std::vector<Click> ClicksFor(std::string_view text) const;

  nlohmann::json ToJson() const;
  static KeyboardLayout FromJson(const nlohmann::json& j);
  bool operator==(const KeyboardLayout& o) const;
};

}  // namespace evote::registry

#endif  // EVOTE_REGISTRY_KEYBOARD_H_
