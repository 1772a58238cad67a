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

#ifndef EVOTE_COMMON_AUDIT_H_
#define EVOTE_COMMON_AUDIT_H_

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "evote/common/clock.h"
#include "evote/common/component.h"
#include "evote/common/durable_log.h"

namespace evote {

// The audit categories the committee must be able to read.
enum class AuditCategory {
  kOfficerAuth,
  kPollStart,
  kPollStop,
  kTallyStartAndResult,
  kSelftestResult,
  kMalfunction,
};

std::string_view AuditCategoryName(AuditCategory c);
AuditCategory AuditCategoryFromName(std::string_view name);

struct AuditEvent {
  Millis timestamp = 0;
  Component component = Component::kCommittee;
  AuditCategory category = AuditCategory::kMalfunction;
  std::string detail;

  std::string ToLine() const;
  static AuditEvent FromLine(std::string_view line);
  bool operator==(const AuditEvent&) const = default;
};

// Audit details are space-separated key=value pairs. Keys come from a fixed
// vocabulary and values are short tokens, so free text (names, ids,
// ballots) cannot be written into an audit record.
class AuditDetail {
 public:
  AuditDetail() = default;
  AuditDetail(std::initializer_list<std::pair<std::string_view, std::string>> kv);

  AuditDetail& Add(std::string_view key, std::string value);
  AuditDetail& Add(std::string_view key, std::int64_t value) {
    return Add(key, std::to_string(value));
  }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

// Redaction schema check applied to every stored and every read detail.
bool IsRedactionSafe(std::string_view detail);

class AuditLog {
 public:
  AuditLog(Component component, const Clock& clock);
  AuditLog(Component component, const Clock& clock, std::filesystem::path path);

  void Record(AuditCategory category, const AuditDetail& detail);
  std::vector<AuditEvent> Events() const;
  // Newline-separated ToLine() records; the durable image.
  std::string Serialize() const;
  static std::vector<AuditEvent> Parse(std::string_view text);

  Component component() const { return component_; }

 private:
  Component component_;
  const Clock& clock_;
  mutable std::mutex mu_;
  DurableLog log_;
};

}  // namespace evote

#endif  // EVOTE_COMMON_AUDIT_H_
