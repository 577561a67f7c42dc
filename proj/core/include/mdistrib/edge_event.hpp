/*
 * Copyright 2026 The MDistrib Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>

#include "mdistrib/sketch_key.hpp"

namespace mdistrib {

/// One log record. tick is the dense 1-based tick index after ingestion;
/// seq is the original record index and fixes output order.
struct EdgeEvent {
  NodeId src = 0;
  NodeId dst = 0;
  std::uint64_t tick = 0;
  std::uint64_t seq = 0;

  friend bool operator==(const EdgeEvent&, const EdgeEvent&) = default;
};

/// Half-open range of ticks [begin, end).
struct TickRange {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;

  bool contains(std::uint64_t tick) const noexcept { return tick >= begin && tick < end; }
  bool empty() const noexcept { return begin >= end; }

  friend bool operator==(const TickRange&, const TickRange&) = default;
};

}  // namespace mdistrib
