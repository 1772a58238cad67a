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

#include "evote/common/error.h"

#include <array>
#include <utility>

namespace evote {
namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 16> kNames{{
    {ErrorCode::kInvalidArgument, "invalid_argument"},
    {ErrorCode::kMalformed, "malformed"},
    {ErrorCode::kWrongPassphrase, "wrong_passphrase"},
    {ErrorCode::kWrongKey, "wrong_key"},
    {ErrorCode::kCorrupted, "corrupted"},
    {ErrorCode::kVerificationFailed, "verification_failed"},
    {ErrorCode::kNotFound, "not_found"},
    {ErrorCode::kAlreadyExists, "already_exists"},
    {ErrorCode::kIllegalState, "illegal_state"},
    {ErrorCode::kPermissionDenied, "permission_denied"},
    {ErrorCode::kUnavailable, "unavailable"},
    {ErrorCode::kBusy, "busy"},
    {ErrorCode::kIo, "io"},
    {ErrorCode::kEntropy, "entropy"},
    {ErrorCode::kReplay, "replay"},
    {ErrorCode::kTransport, "transport"},
}};

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "unknown";
}

ErrorCode ErrorCodeFromName(std::string_view name) {
  for (const auto& [c, n] : kNames) {
    if (n == name) return c;
  }
  return ErrorCode::kTransport;
}

}  // namespace evote
