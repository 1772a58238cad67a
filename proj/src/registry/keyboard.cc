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

#include "evote/registry/keyboard.h"

#include <algorithm>
#include <numeric>

#include "evote/common/error.h"

namespace evote::registry {

KeyboardLayout KeyboardLayout::Shuffled(std::string_view alphabet, RandomSource& rng) {
  std::string chars(alphabet);
  for (std::size_t i = chars.size(); i > 1; --i) {
    std::swap(chars[i - 1], chars[rng.Uniform(i)]);
  }
  KeyboardLayout layout;
  layout.nonce = rng.Generate(16);
  for (std::size_t i = 0; i < chars.size(); ++i) {
    int col = static_cast<int>(i) % kColumns;
    int row = static_cast<int>(i) / kColumns;
    layout.regions.push_back({Rect{col * kCellSize, row * kCellSize, kCellSize, kCellSize},
                              chars[i]});
  }
  return layout;
}

const KeyRegion* KeyboardLayout::RegionFor(char c) const {
  for (const auto& r : regions) {
    if (r.character == c) return &r;
  }
  return nullptr;
}

char KeyboardLayout::Decode(const Click& click) const {
  for (const auto& r : regions) {
    if (r.rect.Contains(click.x, click.y)) return r.character;
  }
  throw Error(ErrorCode::kInvalidArgument, "invalid click");
}

std::string KeyboardLayout::Decode(const std::vector<Click>& clicks) const {
  std::string out;
  out.reserve(clicks.size());
  for (const auto& c : clicks) out.push_back(Decode(c));
  return out;
}

Click KeyboardLayout::CenterOf(char c) const {
  const KeyRegion* r = RegionFor(c);
  if (r == nullptr) throw Error(ErrorCode::kInvalidArgument, "character not on keyboard");
  return {r->rect.x + r->rect.w / 2, r->rect.y + r->rect.h / 2};
}

std::vector<Click> KeyboardLayout::ClicksFor(std::string_view text) const {
  std::vector<Click> out;
  for (char c : text) out.push_back(CenterOf(c));
  return out;
}

nlohmann::json KeyboardLayout::ToJson() const {
  nlohmann::json regions_json = nlohmann::json::array();
  for (const auto& r : regions) {
    regions_json.push_back({{"x", r.rect.x},
                            {"y", r.rect.y},
                            {"w", r.rect.w},
                            {"h", r.rect.h},
                            {"label", std::string(1, r.character)}});
  }
  return {{"nonce", HexEncode(nonce)}, {"regions", regions_json}};
}

KeyboardLayout KeyboardLayout::FromJson(const nlohmann::json& j) {
  KeyboardLayout k;
  k.nonce = HexDecode(j.at("nonce").get<std::string>());
  for (const auto& r : j.at("regions")) {
    const auto label = r.at("label").get<std::string>();
    if (label.size() != 1) throw Error(ErrorCode::kMalformed, "bad key label");
    k.regions.push_back({{r.at("x").get<int>(), r.at("y").get<int>(), r.at("w").get<int>(),
                          r.at("h").get<int>()},
                         label[0]});
  }
  return k;
}

bool KeyboardLayout::operator==(const KeyboardLayout& o) const {
  if (regions.size() != o.regions.size() || nonce != o.nonce) return false;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const auto& a = regions[i];
    const auto& b = o.regions[i];
    if (a.character != b.character || a.rect.x != b.rect.x || a.rect.y != b.rect.y ||
        a.rect.w != b.rect.w || a.rect.h != b.rect.h) {
      return false;
    }
  }
  return true;
}

}  // namespace evote::registry
