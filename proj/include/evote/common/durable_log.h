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

#ifndef EVOTE_COMMON_DURABLE_LOG_H_
#define EVOTE_COMMON_DURABLE_LOG_H_

#include <filesystem>
#include <mutex>
#include <optional>
#include <vector>

#include "evote/common/bytes.h"

namespace evote {

// Append-only record log. Appended records are buffered until Flush();
// only flushed records survive a crash. Frame layout:
//   u32 length | payload | 4-byte SHA-256 prefix of payload
// A truncated or checksum-failing tail is discarded on recovery.
class DurableLog {
 public:
  DurableLog() = default;
  // File-backed; loads and repairs an existing file.
  explicit DurableLog(std::filesystem::path path);

  DurableLog(const DurableLog&) = delete;
  DurableLog& operator=(const DurableLog&) = delete;

  void Append(ByteView record);
  void Flush();

  // Simulated crash: writes only the first `bytes` of the buffered frames
  // (a torn write), then drops the rest of the buffer.
  void TearPending(std::size_t bytes);
  // Simulated crash: drops everything not yet flushed.
  void DropPending();
  // Discards a torn tail. Returns the number of bytes removed.
  std::size_t Recover();

  // Destroys every record.
  void Clear();

  std::vector<Bytes> Records() const;
  std::size_t pending_bytes() const;
  // Durable bytes exactly as stored.
  Bytes Image() const;

  // Replaces the stored bytes; for tamper tests and offline verification.
  void ReplaceImage(ByteView image);
  static std::vector<Bytes> ParseFrames(ByteView image, std::size_t* valid_prefix = nullptr);
  static Bytes Frame(ByteView record);

 private:
  void WriteThrough(ByteView bytes);
  void RewriteFile();

  mutable std::mutex mu_;
  std::optional<std::filesystem::path> path_;
  Bytes durable_;
  Bytes pending_;
};

}  // namespace evote

#endif  // EVOTE_COMMON_DURABLE_LOG_H_
