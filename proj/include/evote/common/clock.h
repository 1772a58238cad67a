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

#ifndef EVOTE_COMMON_CLOCK_H_
#define EVOTE_COMMON_CLOCK_H_

#include <atomic>
#include <cstdint>

namespace evote {

// Milliseconds since an arbitrary epoch. Wall clock in service mode,
// logical time in simulation.
using Millis = std::int64_t;

inline constexpr Millis kSecond = 1000;
inline constexpr Millis kMinute = 60 * kSecond;

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Millis Now() const = 0;
};

class SystemClock final : public Clock {
 public:
  Millis Now() const override;
};

// Logical clock advanced explicitly by the simulation scheduler.
class SimClock final : public Clock {
 public:
  explicit SimClock(Millis start = 0) : now_(start) {}
  Millis Now() const override { return now_.load(); }
  void Advance(Millis delta) { now_ += delta; }
  void Set(Millis t) { now_ = t; }

 private:
  std::atomic<Millis> now_;
};

// A component's view of time: a base clock plus an injectable offset.
class SkewedClock final : public Clock {
 public:
  explicit SkewedClock(const Clock& base) : base_(base) {}
  Millis Now() const override { return base_.Now() + skew_.load(); }
  void SetSkew(Millis skew) { skew_ = skew; }
  Millis skew() const { return skew_.load(); }

 private:
  const Clock& base_;
  std::atomic<Millis> skew_{0};
};

}  // namespace evote

#endif  // EVOTE_COMMON_CLOCK_H_
