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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mdistrib/edge_event.hpp"

namespace mdistrib {

/// Events sorted by (tick, seq) with one 0/1 label per event (labels[i]
/// belongs to events[i]). node_names[id] is the input token of node id.
struct LabeledStream {
  std::vector<EdgeEvent> events;
  std::vector<std::uint8_t> labels;
  std::vector<std::string> node_names;

  std::size_t num_anomalies() const noexcept;
};

/// Maps node tokens to dense ids in first-appearance order.
class NodeInterner {
 public:
  NodeId intern(std::string_view token);
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::vector<std::string> release() && { return std::move(names_); }

 private:
  std::unordered_map<std::string, NodeId> ids_;
  std::vector<std::string> names_;
};

struct EdgeCsvSchema {
  char delimiter = ',';
  bool has_header = false;
};

/// Parses `src,dst,timestamp` lines. Timestamps are non-negative integers
/// and are dense-ranked into ticks 1..T; records sharing a tick keep file
/// order (seq = record index). Blank lines are skipped. Labels, if given,
/// hold one integer (0 or nonzero) per line and must match the record
/// count. Throws IoError naming the offending line.
LabeledStream parse_edge_csv(std::istream& edges, std::istream* labels = nullptr,
                             const EdgeCsvSchema& schema = {});
LabeledStream parse_edge_csv(const std::filesystem::path& edges,
                             const std::optional<std::filesystem::path>& labels = std::nullopt,
                             const EdgeCsvSchema& schema = {});

/// Writes the stream in seq order as `src,dst,tick` using node names, and
/// the labels one per line. Re-parsing the output yields the same stream.
void write_edge_csv(const LabeledStream& stream, std::ostream& edges,
                    std::ostream* labels = nullptr);

/// Dense 1-based ranks of raw timestamps, preserving order.
std::vector<std::uint64_t> dense_rank(const std::vector<std::uint64_t>& raw);

/// A micro-cluster injection: at `tick`, node `src` sends `weight` edges to
/// each of `num_targets` fresh destination nodes.
struct BurstSpec {
  std::uint64_t tick = 0;
  std::uint64_t src = 0;
  std::uint64_t num_targets = 0;
  std::uint64_t weight = 0;

  friend bool operator==(const BurstSpec&, const BurstSpec&) = default;
};

struct SyntheticSpec {
  std::uint64_t num_nodes = 1000;
  std::uint64_t num_ticks = 100;
  std::uint64_t base_rate = 100;  // background edges per tick
  std::vector<BurstSpec> bursts;
  std::uint64_t rng_seed = 1;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
  std::uint64_t expected_anomalies() const noexcept;
};

/// Parses flat key=value text (num_nodes, num_ticks, base_rate, rng_seed,
/// and repeated burst=tick,src,num_targets,weight). '#' starts a comment.
SyntheticSpec parse_synthetic_spec(std::istream& in);
SyntheticSpec parse_synthetic_spec(const std::filesystem::path& path);
void write_synthetic_spec(const SyntheticSpec& spec, std::ostream& out);

/// Background edges are drawn uniformly over ordered pairs of distinct
/// nodes in [0, num_nodes), base_rate per tick, from a counter-based RNG
/// keyed by (seed, tick, draw) and labeled 0. Bursts are appended after the
/// background of their tick and labeled 1; their targets are fresh ids
/// starting at num_nodes. Node ids are then interned in first-appearance
/// order, with node_names holding the generator's ids.
LabeledStream generate_synthetic(const SyntheticSpec& spec);

}  // namespace mdistrib
