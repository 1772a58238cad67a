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

#include "files.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "evote/common/error.h"
#include "evote/crypto/digest.h"

namespace evote::cli {
namespace fs = std::filesystem;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileAtomic(const fs::path& path, std::string_view data) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

void CheckOverwrite(const fs::path& path, bool force, bool yes) {
  if (!fs::exists(path)) return;
  if (!force) {
    throw Error(ErrorCode::kAlreadyExists, path.string() + " exists; pass --force to replace it");
  }
  if (!yes) throw Error(ErrorCode::kInvalidArgument, "replacing " + path.string() + " requires --yes");
}

fs::path MarkerPath(const fs::path& output) {
  fs::path p = output;
  p += ".done";
  return p;
}

namespace {

std::string DigestOf(const fs::path& output) {
  if (fs::is_directory(output)) {
    std::string all;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(output)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) all += f.filename().string() + "\n" + ReadFile(f);
    return crypto::HashBytes(all).Hex();
  }
  return crypto::HashBytes(ReadFile(output)).Hex();
}

}  // namespace

void MarkComplete(const fs::path& output, std::string_view step) {
  nlohmann::json m = {{"step", step}, {"sha256", DigestOf(output)}};
  WriteFileAtomic(MarkerPath(output), m.dump() + "\n");
}

void RequireComplete(const fs::path& output, std::string_view step) {
  const fs::path marker = MarkerPath(output);
  auto incomplete = [&](const std::string& why) {
    throw Error(ErrorCode::kIllegalState,
                "step '" + std::string(step) + "' did not complete for " + output.string() + ": " + why);
  };
  if (!fs::exists(output)) incomplete("output missing");
  if (!fs::exists(marker)) incomplete("no completion marker");
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(ReadFile(marker));
  } catch (const nlohmann::json::exception&) {
    incomplete("unreadable completion marker");
  }
  if (m.value("step", "") != step) incomplete("marker belongs to another step");
  if (m.value("sha256", "") != DigestOf(output)) incomplete("output changed after completion");
}

}  // namespace evote::cli
