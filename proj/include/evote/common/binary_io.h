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

#ifndef EVOTE_COMMON_BINARY_IO_H_
#define EVOTE_COMMON_BINARY_IO_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "evote/common/bytes.h"

namespace evote {

// Big-endian, length-prefixed (u32) field encoding used by every binary
// format in the project.
class BinaryWriter {
 public:
  BinaryWriter& U8(std::uint8_t v);
  BinaryWriter& U32(std::uint32_t v);
  BinaryWriter& U64(std::uint64_t v);
  BinaryWriter& Raw(ByteView v);
  BinaryWriter& Field(ByteView v);
  BinaryWriter& Field(std::string_view v) { return Field(AsBytes(v)); }

  const Bytes& bytes() const { return out_; }
  Bytes Take() { return std::move(out_); }

 private:
  Bytes out_;
};

// Reads the encoding above. Throws Error(kMalformed) on truncation.
class BinaryReader {
 public:
  explicit BinaryReader(ByteView in) : in_(in) {}

  std::uint8_t U8();
  std::uint32_t U32();
  std::uint64_t U64();
  Bytes Raw(std::size_t n);
  Bytes Field();
  std::string FieldString();

  bool AtEnd() const { return pos_ == in_.size(); }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void Need(std::size_t n) const;

  ByteView in_;
  std::size_t pos_ = 0;
};

}  // namespace evote

#endif  // EVOTE_COMMON_BINARY_IO_H_
