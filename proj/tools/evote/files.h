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

#ifndef EVOTE_TOOLS_FILES_H_
#define EVOTE_TOOLS_FILES_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace evote::cli {

// Throws kNotFound or kIo.
std::string ReadFile(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it into place.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view data);

// Refuses to replace an existing output unless --force (and --yes) were given.
void CheckOverwrite(const std::filesystem::path& path, bool force, bool yes);

// Completion markers. A step writes its outputs, then "<output>.done"
// holding the step name and the SHA-256 of the output. A later step
// trusts an input only if its marker is present and still matches.
std::filesystem::path MarkerPath(const std::filesystem::path& output);
void MarkComplete(const std::filesystem::path& output, std::string_view step);
// Throws kIllegalState naming the unfinished step.
void RequireComplete(const std::filesystem::path& output, std::string_view step);

}  // namespace evote::cli

#endif  // EVOTE_TOOLS_FILES_H_
