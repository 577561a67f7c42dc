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
#include <span>
#include <string>
#include <vector>

#include "mdistrib/pipeline.hpp"

namespace mdistrib {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

/// `seq,src,dst,tick,score,edge_score,src_score,dst_score` with a header row.
void write_scores_csv(std::ostream& out, std::span<const ScoredEdge> scores);

/// `phase,partition,worker,millis` with a header row.
void write_timing_csv(std::ostream& out, const RunStats& stats);

/// `id,name` rows mapping interned node ids back to input tokens.
void write_node_map(std::ostream& out, const std::vector<std::string>& names);

/// FNV-1a over the bit patterns of every score, in order.
std::uint64_t score_digest(std::span<const ScoredEdge> scores);

}  // namespace mdistrib
