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

#include "passphrase.h"

#include <fcntl.h>
#include <termios.h>
#include <unistd.h>

#include "evote/common/error.h"

namespace evote::cli {

std::string PassphraseReader::ReadLineFromFd(int fd) {
  std::string line;
  char ch = 0;
  for (;;) {
    const ssize_t n = ::read(fd, &ch, 1);
    if (n < 0) throw Error(ErrorCode::kIo, "cannot read passphrase descriptor");
    if (n == 0 || ch == '\n') break;
    line.push_back(ch);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::string PassphraseReader::Prompt(std::string_view prompt) {
  const int tty = ::open("/dev/tty", O_RDWR | O_NOCTTY);
  if (tty < 0) {
    throw Error(ErrorCode::kInvalidArgument, "no terminal for passphrase entry; use --passphrase-fd");
  }
  (void)!::write(tty, prompt.data(), prompt.size());
  termios saved{};
  const bool restore = ::tcgetattr(tty, &saved) == 0;
  if (restore) {
    termios quiet = saved;
    quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
    ::tcsetattr(tty, TCSAFLUSH, &quiet);
  }
  std::string line = ReadLineFromFd(tty);
  if (restore) ::tcsetattr(tty, TCSAFLUSH, &saved);
  (void)!::write(tty, "\n", 1);
  ::close(tty);
  return line;
}

std::string PassphraseReader::Read(std::string_view label) {
  std::string p = fd_ ? ReadLineFromFd(*fd_) : Prompt("Passphrase for " + std::string(label) + ": ");
  if (p.empty()) throw Error(ErrorCode::kInvalidArgument, "empty passphrase for " + std::string(label));
  return p;
}

std::string PassphraseReader::ReadNew(std::string_view label) {
  std::string p = Read(label);
  if (!fd_ && Prompt("Repeat passphrase for " + std::string(label) + ": ") != p) {
    throw Error(ErrorCode::kInvalidArgument, "passphrases do not match");
  }
  return p;
}

}  // namespace evote::cli
