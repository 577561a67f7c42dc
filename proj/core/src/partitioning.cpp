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

#include "mdistrib/partitioning.hpp"

#include <string>

#include "mdistrib/errors.hpp"

namespace mdistrib {

namespace {
__extension__ typedef unsigned __int128 Wide;
}  // namespace

void check_sorted(std::span<const EdgeEvent> events) {
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].tick == 0) {
      throw ConfigError("event " + std::to_string(i) + " has tick 0; ticks are 1-based");
    }
    if (i > 0) {
      const auto& prev = events[i - 1];
      const auto& cur = events[i];
      if (cur.tick < prev.tick || (cur.tick == prev.tick && cur.seq <= prev.seq)) {
        throw ConfigError("events are not sorted by (tick, seq) at index " + std::to_string(i));
      }
    }
  }
}

std::vector<PartitionSlice> partition_stream(std::span<const EdgeEvent> events, std::uint32_t k) {
  if (k == 0) throw ConfigError("number of partitions must be >= 1");
  const std::size_t n = events.size();
  std::vector<PartitionSlice> out(k);
  for (std::uint32_t p = 0; p < k; ++p) out[p].id = p;

  std::uint32_t p = 0;
  std::size_t i = 0;
  out[0].first = 0;
  out[0].ticks.begin = n ? events[0].tick : 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && events[j].tick == events[i].tick) ++j;
    out[p].last = j;
    out[p].ticks.end = events[i].tick + 1;
    // Close p once its cumulative share is reached; the group stays here.
    if (p + 1 < k && static_cast<Wide>(j) * k >= static_cast<Wide>(p + 1) * n) {
      ++p;
      out[p].first = j;
      out[p].last = j;
      out[p].ticks.begin = out[p].ticks.end = (j < n ? events[j].tick : events[j - 1].tick + 1);
    }
    i = j;
  }
  // Partitions never opened are empty ranges at the stream end.
  const std::uint64_t tail = n ? events[n - 1].tick + 1 : 0;
  for (std::uint32_t q = p + 1; q < k; ++q) {
    out[q].first = out[q].last = n;
    out[q].ticks = {tail, tail};
  }
  return out;
}

}  // namespace mdistrib
