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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mdistrib/edge_event.hpp"

namespace mdistrib {

/// A contiguous slice [first, last) of the sorted event list covering the
/// tick range `ticks`.
struct PartitionSlice {
  std::uint32_t id = 0;
  TickRange ticks;
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const noexcept { return last - first; }
};

/// Splits events sorted by (tick, seq) into k contiguous tick ranges. A tick
/// never spans two partitions. Tick groups are assigned greedily: partition p
/// closes once the events assigned so far reach (p + 1) * n / k, so the
/// partition reaching a boundary keeps the straddling group.
/// Trailing partitions may be empty.
std::vector<PartitionSlice> partition_stream(std::span<const EdgeEvent> events, std::uint32_t k);

/// Throws ConfigError unless events are sorted by (tick, seq) with tick >= 1.
void check_sorted(std::span<const EdgeEvent> events);

}  // namespace mdistrib
