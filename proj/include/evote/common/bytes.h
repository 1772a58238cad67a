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

#ifndef EVOTE_COMMON_BYTES_H_
#define EVOTE_COMMON_BYTES_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evote {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView AsBytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline Bytes ToBytes(std::string_view s) {
  auto v = AsBytes(s);
  return {v.begin(), v.end()};
}

inline Bytes ToBytes(ByteView b) { return {b.begin(), b.end()}; }

inline std::string ToString(ByteView b) {
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

std::string HexEncode(ByteView data);
Bytes HexDecode(std::string_view hex);

// Standard base64 with padding.
std::string Base64Encode(ByteView data);
Bytes Base64Decode(std::string_view text);

// Constant-time equality; false on length mismatch.
bool ConstantTimeEquals(ByteView a, ByteView b);

// True if `needle` occurs anywhere in `haystack`.
bool ContainsBytes(ByteView haystack, ByteView needle);

// Byte vector that is overwritten with pseudorandom data when destroyed.
class SecureBytes {
 public:
  SecureBytes() = default;
  explicit SecureBytes(std::size_t n) : data_(n) {}
  explicit SecureBytes(ByteView v) : data_(v.begin(), v.end()) {}
  SecureBytes(const SecureBytes& other) = default;
  SecureBytes& operator=(const SecureBytes& other);
  SecureBytes(SecureBytes&& other) noexcept;
  SecureBytes& operator=(SecureBytes&& other) noexcept;
  ~SecureBytes();

  std::uint8_t* data() { return data_.data(); }
  const std::uint8_t* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  ByteView view() const { return data_; }
  std::span<std::uint8_t> span() { return data_; }

  // Overwrites the contents and releases them.
  void Wipe();

 private:
  Bytes data_;
};

}  // namespace evote

#endif  // EVOTE_COMMON_BYTES_H_
