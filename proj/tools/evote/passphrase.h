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

#ifndef EVOTE_TOOLS_PASSPHRASE_H_
#define EVOTE_TOOLS_PASSPHRASE_H_

#include <optional>
#include <string>
#include <string_view>

namespace evote::cli {

// Passphrases come from an inherited file descriptor (one per line) or an
// echo-free prompt on the controlling terminal. Never from argv.
class PassphraseReader {
 public:
  explicit PassphraseReader(std::optional<int> fd) : fd_(fd) {}

  // Throws kInvalidArgument when neither source is available or the
  // passphrase is empty.
  std::string Read(std::string_view label);
  // Prompts twice on a terminal; reads once from a descriptor.
  std::string ReadNew(std::string_view label);

 private:
  std::string ReadLineFromFd(int fd);
  std::string Prompt(std::string_view prompt);

  std::optional<int> fd_;
};

}  // namespace evote::cli

#endif  // EVOTE_TOOLS_PASSPHRASE_H_
