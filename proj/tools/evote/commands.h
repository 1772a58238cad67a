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

#ifndef EVOTE_TOOLS_COMMANDS_H_
#define EVOTE_TOOLS_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace evote::cli {

// Exit status contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

struct Common {
  bool json = false;
  bool force = false;
  bool yes = false;
  std::optional<int> passphrase_fd;
};

// Prints one record: the JSON object with --json, otherwise `text`.
void Emit(const Common& common, const nlohmann::json& record, const std::string& text);

int Keygen(const Common& common, const std::filesystem::path& keys,
           const std::vector<std::string>& components, const std::string& kdf);

// Argon2id string for an officer password, for the "password_hash" field of
// a served election config.
int OfficerHash(const Common& common, const std::string& kdf);

int CredentialsGenerate(const Common& common, std::size_t count, const std::filesystem::path& out,
                        std::optional<std::uint64_t> seed, std::size_t length);
int CredentialsSign(const Common& common, const std::filesystem::path& credentials,
                    const std::filesystem::path& keys, const std::filesystem::path& out);
int CredentialsExport(const Common& common, const std::filesystem::path& credentials,
                      const std::filesystem::path& out_dir);

int RegisterBuild(const Common& common, const std::filesystem::path& records,
                  const std::filesystem::path& keys, const std::filesystem::path& out);
int RegisterVerify(const Common& common, const std::filesystem::path& reg,
                   const std::filesystem::path& keys);

// `artifacts` entries are "name=path".
int BaselineRecord(const Common& common, const std::filesystem::path& keys,
                   const std::vector<std::string>& artifacts, const std::filesystem::path& out);
int BaselineVerify(const Common& common, const std::filesystem::path& baseline,
                   const std::filesystem::path& keys);

int Simulate(const Common& common, const std::filesystem::path& script, std::uint64_t seed,
             const std::string& mode, const std::optional<std::filesystem::path>& report);

int VerifyArchive(const Common& common, const std::filesystem::path& archive,
                  const std::filesystem::path& keys);
int VerifyChain(const Common& common, const std::filesystem::path& store,
                const std::filesystem::path& keys, std::size_t block_size, bool sealed);

struct ServeOptions {
  std::string component;
  std::filesystem::path config;
  std::filesystem::path keys;
  std::filesystem::path data;
  std::optional<std::filesystem::path> register_file;
  std::string bind = "127.0.0.1:0";
  std::vector<std::string> peers;  // "name=host:port"
  std::string kdf = "interactive";
};
int Serve(const Common& common, const ServeOptions& options);

}  // namespace evote::cli

#endif  // EVOTE_TOOLS_COMMANDS_H_
