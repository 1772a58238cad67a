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

#include "evote/common/durable_log.h"

#include <fcntl.h>
#include <unistd.h>

#include <fstream>
#include <iterator>

#include "evote/common/binary_io.h"
#include "evote/common/error.h"
#include "evote/crypto/digest.h"

namespace evote {
namespace {

constexpr std::size_t kChecksumSize = 4;

Bytes ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return {};
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

DurableLog::DurableLog(std::filesystem::path path) : path_(std::move(path)) {
  durable_ = ReadFile(*path_);
  std::size_t valid = 0;
  ParseFrames(durable_, &valid);
  if (valid != durable_.size()) {
    durable_.resize(valid);
    RewriteFile();
  }
}

Bytes DurableLog::Frame(ByteView record) {
  BinaryWriter w;
  w.Field(record);
  auto digest = crypto::HashBytes(record);
  w.Raw(ByteView(digest.bytes.data(), kChecksumSize));
  return w.Take();
}

std::vector<Bytes> DurableLog::ParseFrames(ByteView image, std::size_t* valid_prefix) {
  std::vector<Bytes> out;
  std::size_t pos = 0;
  while (image.size() - pos >= 4) {
    BinaryReader r(image.subspan(pos));
    std::uint32_t len = r.U32();
    if (r.remaining() < static_cast<std::size_t>(len) + kChecksumSize) break;
    Bytes payload = r.Raw(len);
    Bytes check = r.Raw(kChecksumSize);
    auto digest = crypto::HashBytes(payload);
    if (!std::equal(check.begin(), check.end(), digest.bytes.begin())) break;
    out.push_back(std::move(payload));
    pos += r.position();
  }
  if (valid_prefix != nullptr) *valid_prefix = pos;
  return out;
}

void DurableLog::Append(ByteView record) {
  Bytes frame = Frame(record);
  std::lock_guard lock(mu_);
  pending_.insert(pending_.end(), frame.begin(), frame.end());
}

void DurableLog::Flush() {
  std::lock_guard lock(mu_);
  if (pending_.empty()) return;
  WriteThrough(pending_);
  durable_.insert(durable_.end(), pending_.begin(), pending_.end());
  pending_.clear();
}

void DurableLog::TearPending(std::size_t bytes) {
  std::lock_guard lock(mu_);
  bytes = std::min(bytes, pending_.size());
  ByteView part(pending_.data(), bytes);
  WriteThrough(part);
  durable_.insert(durable_.end(), part.begin(), part.end());
  pending_.clear();
}

void DurableLog::DropPending() {
  std::lock_guard lock(mu_);
  pending_.clear();
}

std::size_t DurableLog::Recover() {
  std::lock_guard lock(mu_);
  std::size_t valid = 0;
  ParseFrames(durable_, &valid);
  std::size_t removed = durable_.size() - valid;
  if (removed > 0) {
    durable_.resize(valid);
    RewriteFile();
  }
  return removed;
}

void DurableLog::Clear() {
  std::lock_guard lock(mu_);
  durable_.clear();
  pending_.clear();
  RewriteFile();
}

std::vector<Bytes> DurableLog::Records() const {
  std::lock_guard lock(mu_);
  return ParseFrames(durable_);
}

std::size_t DurableLog::pending_bytes() const {
  std::lock_guard lock(mu_);
  return pending_.size();
}

Bytes DurableLog::Image() const {
  std::lock_guard lock(mu_);
  return durable_;
}

void DurableLog::ReplaceImage(ByteView image) {
  std::lock_guard lock(mu_);
  durable_.assign(image.begin(), image.end());
  pending_.clear();
  RewriteFile();
}

void DurableLog::WriteThrough(ByteView bytes) {
  if (!path_) return;
  int fd = ::open(path_->c_str(), O_WRONLY | O_CREAT | O_APPEND, 0600);
  if (fd < 0) throw Error(ErrorCode::kIo, "cannot open " + path_->string());
  std::size_t done = 0;
  while (done < bytes.size()) {
    ssize_t n = ::write(fd, bytes.data() + done, bytes.size() - done);
    if (n <= 0) {
      ::close(fd);
      throw Error(ErrorCode::kIo, "write failed on " + path_->string());
    }
    done += static_cast<std::size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
}

void DurableLog::RewriteFile() {
  if (!path_) return;
  std::ofstream out(*path_, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(durable_.data()),
            static_cast<std::streamsize>(durable_.size()));
  if (!out) throw Error(ErrorCode::kIo, "cannot rewrite " + path_->string());
}

}  // namespace evote
