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

#include "evote/committee/baseline.h"

#include <fstream>
#include <iterator>

#include "evote/common/binary_io.h"
#include "evote/common/error.h"
#include "evote/wire/codec.h"

namespace evote::committee {
namespace {

std::optional<crypto::Digest> HashFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return crypto::HashBytes(data);
}

}  // namespace

Bytes SoftwareBaseline::SignedBytes() const {
  BinaryWriter w;
  w.Field(AsBytes("evote-baseline-v1"));
  w.U64(static_cast<std::uint64_t>(recorded_at));
  w.U32(static_cast<std::uint32_t>(artifacts.size()));
  for (const auto& [name, a] : artifacts) {
    w.Field(AsBytes(name));
    w.Field(AsBytes(a.path));
    w.Field(a.digest.view());
  }
  return w.Take();
}

nlohmann::json SoftwareBaseline::ToJson() const {
  nlohmann::json arts = nlohmann::json::object();
  for (const auto& [name, a] : artifacts) {
    arts[name] = {{"path", a.path}, {"sha256", a.digest.Hex()}};
  }
  return {{"artifacts", arts},
          {"recorded_at", recorded_at},
          {"signature", wire::EncodeSignature(signature)}};
}

SoftwareBaseline SoftwareBaseline::FromJson(const nlohmann::json& j) {
  SoftwareBaseline b;
  try {
    for (const auto& [name, a] : j.at("artifacts").items()) {
      Bytes d = HexDecode(a.at("sha256").get<std::string>());
      b.artifacts[name] = {a.at("path").get<std::string>(), crypto::Digest::FromBytes(d)};
    }
    b.recorded_at = j.at("recorded_at").get<Millis>();
    b.signature = wire::DecodeSignature(j.at("signature"));
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kMalformed, "malformed baseline");
  }
  return b;
}

SoftwareBaseline RecordBaseline(const std::map<std::string, std::filesystem::path>& artifacts,
                                Millis now, const crypto::PrivateKey& signer) {
  if (artifacts.empty()) throw Error(ErrorCode::kInvalidArgument, "no artifacts");
  SoftwareBaseline b;
  for (const auto& [name, path] : artifacts) {
    auto digest = HashFile(path);
    if (!digest) throw Error(ErrorCode::kNotFound, "missing artifact: " + name);
    b.artifacts[name] = {std::filesystem::absolute(path).string(), *digest};
  }
  b.recorded_at = now;
  b.signature = crypto::Sign(signer, b.SignedBytes());
  return b;
}

bool BaselineReport::ok() const {
  if (!signature_ok) return false;
  for (const auto& [name, s] : status) {
    if (s != "ok") return false;
  }
  return true;
}

std::vector<std::string> BaselineReport::Mismatches() const {
  std::vector<std::string> out;
  for (const auto& [name, s] : status) {
    if (s != "ok") out.push_back(name);
  }
  return out;
}

nlohmann::json BaselineReport::ToJson() const {
  return {{"ok", ok()}, {"signature_ok", signature_ok}, {"artifacts", status}};
}

BaselineReport VerifyBaseline(const SoftwareBaseline& baseline, const crypto::PublicKey& signer) {
  BaselineReport r;
  r.signature_ok = crypto::Verify(signer, baseline.SignedBytes(), baseline.signature);
  for (const auto& [name, a] : baseline.artifacts) {
    auto digest = HashFile(a.path);
    r.status[name] = !digest ? "missing" : (*digest == a.digest ? "ok" : "mismatch");
  }
  return r;
}

}  // namespace evote::committee
