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
#include <iosfwd>
#include <variant>

#include "mdistrib/count_min_sketch.hpp"
#include "mdistrib/frequent_items_sketch.hpp"

namespace mdistrib::snapshot {

// Binary layout, all integers and doubles little-endian:
//   magic "MDSK" | version u16 | kind u8 (0 = CMS, 1 = FIS)
//   | rows u32 | buckets-or-max_map_size u32 | master_seed u64
// CMS body: rows * buckets f64 counters, row-major.
// FIS body: load_factor f64 | total_weight f64 | entry_count u32
//   | entry_count * (key 16 bytes | weight f64) | error_offset f64
// A FIS header stores rows = 0 and master_seed = 0. A 16-byte key is
// a u64 followed by b u64 with the top bit of b set for node keys.

inline constexpr std::uint16_t kVersion = 1;

void write(std::ostream& out, const CountMinSketch& sketch);
void write(std::ostream& out, const FrequentItemsSketch& sketch);

/// Throws IoError on truncated or malformed input.
std::variant<CountMinSketch, FrequentItemsSketch> read(std::istream& in);

}  // namespace mdistrib::snapshot
