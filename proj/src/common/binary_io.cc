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

#include "evote/common/binary_io.h"

#include "evote/common/error.h"

namespace evote {

BinaryWriter& BinaryWriter::U8(std::uint8_t v) {
  out_.push_back(v);
  return *this;
}

BinaryWriter& BinaryWriter::U32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
  return *this;
}

BinaryWriter& BinaryWriter::U64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
  return *this;
}

BinaryWriter& BinaryWriter::Raw(ByteView v) {
  out_.insert(out_.end(), v.begin(), v.end());
  return *this;
}

BinaryWriter& BinaryWriter::Field(ByteView v) {
  if (v.size() > UINT32_MAX) throw Error(ErrorCode::kInvalidArgument, "field too large");
  U32(static_cast<std::uint32_t>(v.size()));
  return Raw(v);
}

void BinaryReader::Need(std::size_t n) const {
  if (in_.size() - pos_ < n) throw Error(ErrorCode::kMalformed, "truncated input");
}

std::uint8_t BinaryReader::U8() {
  Need(1);
  return in_[pos_++];
}

std::uint32_t BinaryReader::U32() {
  Need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | in_[pos_++];
  return v;
}

std::uint64_t BinaryReader::U64() {
  Need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | in_[pos_++];
  return v;
}

Bytes BinaryReader::Raw(std::size_t n) {
  Need(n);
  Bytes out(in_.begin() + pos_, in_.begin() + pos_ + n);
  pos_ += n;
  return out;
}

Bytes BinaryReader::Field() { return Raw(U32()); }

std::string BinaryReader::FieldString() { return ToString(Field()); }

}  // namespace evote
