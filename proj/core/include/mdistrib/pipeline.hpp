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

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mdistrib/edge_event.hpp"
#include "mdistrib/frequency_sketch.hpp"
#include "mdistrib/partitioning.hpp"
#include "mdistrib/scoring.hpp"

namespace mdistrib {

/// How a partition's cumulative (CS) estimate reads its prefix: one merged
/// sketch per partition, or a sum over the frozen per-partition sketches.
enum class QueryMode { merged, per_partition };

struct PipelineConfig {
  SketchVariant variant = SketchVariant::cms;
  bool relational = true;
  std::uint32_t rows = 2;
  std::uint32_t buckets = 719;
  std::uint32_t max_map_size = 1024;
  double load_factor = FrequentItemsSketch::kDefaultLoadFactor;
  std::uint32_t num_partitions = 8;
  std::uint32_t num_workers = 1;
  double alpha = 0.6;
  DecayMode decay_mode = DecayMode::constant;
  QueryMode query_mode = QueryMode::merged;
  std::uint64_t master_seed = 42;
  // Sub-shards per partition in pass 1, merged in shard order.
  std::uint32_t pass1_shards = 1;

  /// Throws ConfigError describing the first invalid field.
  void validate() const;

  SketchConfig sketch_config() const;
  TickPolicy tick_policy() const { return {relational, alpha, decay_mode}; }
};

/// Counts sketch instances created during a run. Persistent instances are
/// the per-partition CE sets and the prefix carry; scratch instances are
/// per-worker working sets that do not outlive their phase.
class SketchAllocator {
 public:
  SketchAllocator(const SketchConfig& config, bool with_nodes)
      : config_(config), with_nodes_(with_nodes) {}

  SketchSet make_persistent();
  SketchSet make_scratch();

  std::uint64_t persistent_count() const noexcept { return persistent_.load(); }
  std::uint64_t scratch_count() const noexcept { return scratch_.load(); }
  std::uint64_t persistent_bytes() const noexcept { return persistent_bytes_.load(); }
  std::uint64_t scratch_bytes() const noexcept { return scratch_bytes_.load(); }

 private:
  SketchConfig config_;
  bool with_nodes_;
  std::atomic<std::uint64_t> persistent_{0};
  std::atomic<std::uint64_t> scratch_{0};
  std::atomic<std::uint64_t> persistent_bytes_{0};
  std::atomic<std::uint64_t> scratch_bytes_{0};
};

/// One partition's CE sketches: after pass 1 they hold the partition's
/// accumulated (undecayed) weights, which prefix sums are built from.
struct PartitionState {
  std::uint32_t partition_id = 0;
  TickRange ticks;
  SketchSet ce;
  bool frozen = false;

  PartitionState(std::uint32_t id, TickRange range, SketchSet sketches)
      : partition_id(id), ticks(range), ce(std::move(sketches)) {}
};

/// Intermediate values behind an edge score, for auditing. s_lower is the
/// lower bound of the cumulative edge estimate (equal to s_hat for CMS).
struct EdgeAudit {
  double a_hat = 0.0;
  double s_hat = 0.0;
  double s_lower = 0.0;
  std::uint64_t t = 0;

  friend bool operator==(const EdgeAudit&, const EdgeAudit&) = default;
};

struct ScoredEdge {
  EdgeEvent edge;
  double score = 0.0;
  ScoreComponents components;
  EdgeAudit audit;

  friend bool operator==(const ScoredEdge&, const ScoredEdge&) = default;
};

struct TimingRecord {
  std::string phase;
  std::int64_t partition = -1;  // -1 for whole-phase records
  std::uint32_t worker = 0;
  double millis = 0.0;
};

struct RunStats {
  std::vector<TimingRecord> timings;
  double pass1_millis = 0.0;
  double prefix_millis = 0.0;
  double pass2_millis = 0.0;
  double total_millis = 0.0;
  std::uint64_t persistent_sketches = 0;
  std::uint64_t scratch_sketches = 0;
  std::uint64_t persistent_bytes = 0;
  std::uint64_t scratch_bytes = 0;

  std::uint64_t peak_sketch_bytes() const noexcept { return persistent_bytes + scratch_bytes; }
};

/// Pass 1: accumulates the partition's events into its CE sketches and
/// freezes it. Throws InvariantError if the state is already frozen or an
/// event falls outside its tick range.
void pass1_build_ce(PartitionState& state, std::span<const EdgeEvent> events,
                    const PipelineConfig& config, SketchAllocator* allocator = nullptr);

enum class SketchRole { edge, src, dst };

/// Read handle over CE_0 ⊕ ... ⊕ CE_{i-1}.
class PrefixSum {
 public:
  static PrefixSum merged(SketchSet sum);
  static PrefixSum per_partition(std::vector<const SketchSet*> parts);

  QueryMode mode() const noexcept { return mode_; }
  FrequencyEstimate estimate(SketchRole role, const SketchKey& key) const;

  /// Merged mode only.
  const SketchSet& merged_set() const;
  SketchSet release_merged() &&;
  /// Per-partition mode only.
  std::span<const SketchSet* const> parts() const noexcept { return parts_; }

 private:
  QueryMode mode_ = QueryMode::merged;
  std::vector<SketchSet> owned_;
  std::vector<const SketchSet*> parts_;
};

/// Prefix CS for partition i. Throws InvariantError if any of partitions
/// 0..i-1 is not frozen.
PrefixSum compute_prefix_cs(std::span<const PartitionState> partitions, std::size_t i,
                            QueryMode mode, const PipelineConfig& config);

/// Pass 2 for partition i: replays its events tick by tick against fresh
/// current-tick sketches and scores each event against the prefix plus the
/// partition's running totals. Output is in the order of `events`.
std::vector<ScoredEdge> pass2_score(std::span<const PartitionState> partitions, std::size_t i,
                                    std::span<const EdgeEvent> events,
                                    const PipelineConfig& config);

/// Partitions the stream, runs pass 1 and pass 2 over a pool of
/// config.num_workers threads and returns one ScoredEdge per event, ordered
/// by seq. The result does not depend on num_workers.
std::vector<ScoredEdge> run_pipeline(std::span<const EdgeEvent> events,
                                     const PipelineConfig& config, RunStats* stats = nullptr);

}  // namespace mdistrib
