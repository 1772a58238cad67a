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

#include "evote/common/audit.h"

#include <algorithm>
#include <array>
#include <sstream>

#include "evote/common/error.h"

namespace evote {
namespace {

constexpr std::array<std::pair<AuditCategory, std::string_view>, 6> kCategoryNames{{
    {AuditCategory::kOfficerAuth, "officer_auth"},
    {AuditCategory::kPollStart, "poll_start"},
    {AuditCategory::kPollStop, "poll_stop"},
    {AuditCategory::kTallyStartAndResult, "tally_start_and_result"},
    {AuditCategory::kSelftestResult, "selftest_result"},
    {AuditCategory::kMalfunction, "malfunction"},
}};

constexpr std::array<std::string_view, 28> kAllowedKeys = {
    "event",   "outcome",  "officer",   "action",   "state",     "component",
    "count",   "votes",    "voters",    "active",   "reason",    "check",
    "slot",    "remaining", "trigger",  "skew_ms",  "blocks",    "threshold",
    "step",    "total",    "digest",    "member",   "artifact",  "type",
    "code",    "failed",   "approvals", "grace_ms",
};

bool SafeKey(std::string_view k) {
  return std::find(kAllowedKeys.begin(), kAllowedKeys.end(), k) != kAllowedKeys.end();
}

bool SafeValue(std::string_view v) {
  if (v.empty() || v.size() > 80) return false;
  return std::all_of(v.begin(), v.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-' || c == '.' || c == ':' || c == '/' || c == ',';
  });
}

}  // namespace

std::string_view AuditCategoryName(AuditCategory c) {
  for (const auto& [cat, name] : kCategoryNames) {
    if (cat == c) return name;
  }
  return "unknown";
}

AuditCategory AuditCategoryFromName(std::string_view name) {
  for (const auto& [cat, n] : kCategoryNames) {
    if (n == name) return cat;
  }
  throw Error(ErrorCode::kMalformed, "unknown audit category: " + std::string(name));
}

std::string AuditEvent::ToLine() const {
  std::ostringstream out;
  out << timestamp << '\t' << ComponentName(component) << '\t' << AuditCategoryName(category)
      << '\t' << detail;
  return out.str();
}

AuditEvent AuditEvent::FromLine(std::string_view line) {
  std::array<std::string_view, 4> f;
  for (int i = 0; i < 3; ++i) {
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw Error(ErrorCode::kMalformed, "bad audit line");
    f[i] = line.substr(0, tab);
    line.remove_prefix(tab + 1);
  }
  f[3] = line;
  AuditEvent e;
  try {
    e.timestamp = std::stoll(std::string(f[0]));
  } catch (const std::exception&) {
    throw Error(ErrorCode::kMalformed, "bad audit timestamp");
  }
  e.component = ComponentFromName(f[1]);
  e.category = AuditCategoryFromName(f[2]);
  e.detail = std::string(f[3]);
  return e;
}

AuditDetail::AuditDetail(std::initializer_list<std::pair<std::string_view, std::string>> kv) {
  for (const auto& [k, v] : kv) Add(k, v);
}

AuditDetail& AuditDetail::Add(std::string_view key, std::string value) {
  if (!SafeKey(key)) throw Error(ErrorCode::kInvalidArgument, "audit key not allowed");
  if (!SafeValue(value)) throw Error(ErrorCode::kInvalidArgument, "audit value not allowed");
  if (!text_.empty()) text_ += ' ';
  text_ += key;
  text_ += '=';
  text_ += value;
  return *this;
}

bool IsRedactionSafe(std::string_view detail) {
  if (detail.empty()) return true;
  std::size_t pos = 0;
  while (pos <= detail.size()) {
    auto end = detail.find(' ', pos);
    if (end == std::string_view::npos) end = detail.size();
    auto pair = detail.substr(pos, end - pos);
    auto eq = pair.find('=');
    if (eq == std::string_view::npos) return false;
    if (!SafeKey(pair.substr(0, eq)) || !SafeValue(pair.substr(eq + 1))) return false;
    pos = end + 1;
  }
  return true;
}

AuditLog::AuditLog(Component component, const Clock& clock)
    : component_(component), clock_(clock) {}

AuditLog::AuditLog(Component component, const Clock& clock, std::filesystem::path path)
    : component_(component), clock_(clock), log_(std::move(path)) {}

void AuditLog::Record(AuditCategory category, const AuditDetail& detail) {
  if (!IsRedactionSafe(detail.str())) {
    throw Error(ErrorCode::kInvalidArgument, "audit detail fails redaction schema");
  }
  AuditEvent e{clock_.Now(), component_, category, detail.str()};
  std::lock_guard lock(mu_);
  log_.Append(AsBytes(e.ToLine()));
  log_.Flush();
}

std::vector<AuditEvent> AuditLog::Events() const {
  std::lock_guard lock(mu_);
  std::vector<AuditEvent> out;
  for (const auto& rec : log_.Records()) {
    AuditEvent e = AuditEvent::FromLine(ToString(rec));
    if (!IsRedactionSafe(e.detail)) {
      throw Error(ErrorCode::kCorrupted, "audit record fails redaction schema");
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string AuditLog::Serialize() const {
  std::string out;
  for (const auto& e : Events()) {
    out += e.ToLine();
    out += '\n';
  }
  return out;
}

std::vector<AuditEvent> AuditLog::Parse(std::string_view text) {
  std::vector<AuditEvent> out;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty()) out.push_back(AuditEvent::FromLine(line));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return out;
}

}  // namespace evote
