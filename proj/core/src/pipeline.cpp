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

#include "mdistrib/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>

#include "mdistrib/errors.hpp"
#include "parallel.hpp"

namespace mdistrib {

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

const FrequencySketch& role_of(const SketchSet& set, SketchRole role) {
  switch (role) {
    case SketchRole::edge:
      return set.edge;
    case SketchRole::src:
      return *set.src;
    case SketchRole::dst:
      return *set.dst;
  }
  return set.edge;
}

void accumulate(SketchSet& set, const EdgeEvent& ev) {
  set.edge.update(SketchKey::edge(ev.src, ev.dst));
  if (set.has_nodes()) {
    set.src->update(SketchKey::node(ev.src));
    set.dst->update(SketchKey::node(ev.dst));
  }
}

// Cumulative estimates for one role: either the live totals alone (merged
// mode, where the totals were seeded with the prefix) or the frozen prefix
// parts followed by the live totals.
class CumulativeReader {
 public:
  CumulativeReader(std::span<const SketchSet* const> prefix, const SketchSet& live,
                   SketchRole role) {
    parts_.reserve(prefix.size() + 1);
    for (const auto* p : prefix) parts_.push_back(&role_of(*p, role));
    parts_.push_back(&role_of(live, role));
  }

  FrequencyEstimate estimate(const SketchKey& key) const {
    if (parts_.size() == 1) return parts_.front()->estimate(key);
    return estimate_combined(parts_, key);
  }

 private:
  std::vector<const FrequencySketch*> parts_;
};

// Replays a partition's events in order, maintaining the current-tick
// sketches and the running totals, and writes one ScoredEdge per event.
void score_events(std::span<const EdgeEvent> events, const TickRange& ticks,
                  std::span<const SketchSet* const> prefix, SketchSet& totals,
                  SketchSet& current, const PipelineConfig& config, ScoredEdge* out) {
  const TickPolicy policy = config.tick_policy();
  const bool relational = current.has_nodes();
  const CumulativeReader edge_sum(prefix, totals, SketchRole::edge);
  std::optional<CumulativeReader> src_sum;
  std::optional<CumulativeReader> dst_sum;
  if (relational) {
    src_sum.emplace(prefix, totals, SketchRole::src);
    dst_sum.emplace(prefix, totals, SketchRole::dst);
  }

  std::uint64_t tick = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const EdgeEvent& ev = events[i];
    if (!ticks.contains(ev.tick)) {
      throw InvariantError("pass 2: event seq " + std::to_string(ev.seq) +
                           " outside partition tick range");
    }
    if (ev.tick != tick) {
      if (tick != 0) advance_tick(current, policy, ev.tick - ticks.begin + 1);
      tick = ev.tick;
    }
    const SketchKey edge_key = SketchKey::edge(ev.src, ev.dst);
    current.edge.update(edge_key);
    totals.edge.update(edge_key);
    const FrequencyEstimate s_edge = edge_sum.estimate(edge_key);
    const ScoreInputs edge_in{current.edge.estimate(edge_key).point, s_edge.point, ev.tick};

    ScoredEdge& result = out[i];
    result.edge = ev;
    result.audit = {edge_in.a_hat, edge_in.s_hat, s_edge.lower, ev.tick};
    if (relational) {
      const SketchKey src_key = SketchKey::node(ev.src);
      const SketchKey dst_key = SketchKey::node(ev.dst);
      current.src->update(src_key);
      current.dst->update(dst_key);
      totals.src->update(src_key);
      totals.dst->update(dst_key);
      const ScoreInputs src_in{current.src->estimate(src_key).point,
                               src_sum->estimate(src_key).point, ev.tick};
      const ScoreInputs dst_in{current.dst->estimate(dst_key).point,
                               dst_sum->estimate(dst_key).point, ev.tick};
      const RelationalScore r = score_edge_relational(edge_in, src_in, dst_in);
      result.score = r.score;
      result.components = r.components;
    } else {
      result.score = chi2_score(edge_in);
      result.components = {result.score, 0.0, 0.0};
    }
  }
}

void check_events_in_range(const PartitionState& state, std::span<const EdgeEvent> events) {
  for (const auto& ev : events) {
    if (!state.ticks.contains(ev.tick)) {
      throw InvariantError("pass 1: event seq " + std::to_string(ev.seq) + " with tick " +
                           std::to_string(ev.tick) + " outside partition " +
                           std::to_string(state.partition_id));
    }
  }
}

}  // namespace

void PipelineConfig::validate() const {
  if (variant == SketchVariant::cms && (rows == 0 || buckets == 0)) {
    throw ConfigError("rows and buckets must be >= 1");
  }
  if (variant == SketchVariant::fis) {
    if (max_map_size < 2 || (max_map_size & (max_map_size - 1)) != 0) {
      throw ConfigError("max_map_size must be a power of two >= 2");
    }
    if (!(load_factor > 0.0 && load_factor < 1.0)) {
      throw ConfigError("load_factor must be in (0, 1)");
    }
  }
  if (num_partitions == 0) throw ConfigError("partitions must be >= 1");
  if (num_workers == 0) throw ConfigError("workers must be >= 1");
  if (pass1_shards == 0) throw ConfigError("shards must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must be in (0, 1]");
}

SketchConfig PipelineConfig::sketch_config() const {
  return {variant, rows, buckets, master_seed, max_map_size, load_factor};
}

SketchSet SketchAllocator::make_persistent() {
  SketchSet s(config_, with_nodes_);
  persistent_ += s.sketch_count();
  persistent_bytes_ += s.memory_bytes();
  return s;
}

SketchSet SketchAllocator::make_scratch() {
  SketchSet s(config_, with_nodes_);
  scratch_ += s.sketch_count();
  scratch_bytes_ += s.memory_bytes();
  return s;
}

void pass1_build_ce(PartitionState& state, std::span<const EdgeEvent> events,
                    const PipelineConfig& config, SketchAllocator* allocator) {
  if (state.frozen) {
    throw InvariantError("pass 1: partition " + std::to_string(state.partition_id) +
                         " is already frozen");
  }
  check_events_in_range(state, events);
  const std::size_t shards = std::min<std::size_t>(config.pass1_shards, events.size());
  if (shards <= 1) {
    for (const auto& ev : events) accumulate(state.ce, ev);
  } else {
    std::vector<SketchSet> partial;
    partial.reserve(shards);
    for (std::size_t s = 0; s < shards; ++s) {
      partial.push_back(allocator ? allocator->make_scratch()
                                  : SketchSet(config.sketch_config(), config.relational));
    }
    const std::size_t chunk = (events.size() + shards - 1) / shards;
    detail::parallel_for(shards, static_cast<std::uint32_t>(shards),
                         [&](std::size_t s, std::uint32_t) {
                           const std::size_t lo = std::min(events.size(), s * chunk);
                           const std::size_t hi = std::min(events.size(), lo + chunk);
                           for (std::size_t i = lo; i < hi; ++i) accumulate(partial[s], events[i]);
                         });
    for (const auto& p : partial) state.ce.merge(p);
  }
  state.frozen = true;
}

PrefixSum PrefixSum::merged(SketchSet sum) {
  PrefixSum p;
  p.mode_ = QueryMode::merged;
  p.owned_.push_back(std::move(sum));
  return p;
}

PrefixSum PrefixSum::per_partition(std::vector<const SketchSet*> parts) {
  PrefixSum p;
  p.mode_ = QueryMode::per_partition;
  p.parts_ = std::move(parts);
  return p;
}

FrequencyEstimate PrefixSum::estimate(SketchRole role, const SketchKey& key) const {
  if (mode_ == QueryMode::merged) return role_of(owned_.front(), role).estimate(key);
  std::vector<const FrequencySketch*> sketches;
  sketches.reserve(parts_.size());
  for (const auto* p : parts_) sketches.push_back(&role_of(*p, role));
  return estimate_combined(sketches, key);
}

const SketchSet& PrefixSum::merged_set() const {
  if (mode_ != QueryMode::merged) throw std::logic_error("PrefixSum: not in merged mode");
  return owned_.front();
}

SketchSet PrefixSum::release_merged() && {
  if (mode_ != QueryMode::merged) throw std::logic_error("PrefixSum: not in merged mode");
  return std::move(owned_.front());
}

PrefixSum compute_prefix_cs(std::span<const PartitionState> partitions, std::size_t i,
                            QueryMode mode, const PipelineConfig& config) {
  if (i > partitions.size()) throw std::out_of_range("compute_prefix_cs: index out of range");
  for (std::size_t j = 0; j < i; ++j) {
    if (!partitions[j].frozen) {
      throw InvariantError("prefix read of unfrozen partition " + std::to_string(j));
    }
  }
  if (mode == QueryMode::merged) {
    SketchSet sum(config.sketch_config(), config.relational);
    for (std::size_t j = 0; j < i; ++j) sum.merge(partitions[j].ce);
    return PrefixSum::merged(std::move(sum));
  }
  std::vector<const SketchSet*> parts;
  parts.reserve(i);
  for (std::size_t j = 0; j < i; ++j) parts.push_back(&partitions[j].ce);
  return PrefixSum::per_partition(std::move(parts));
}

std::vector<ScoredEdge> pass2_score(std::span<const PartitionState> partitions, std::size_t i,
                                    std::span<const EdgeEvent> events,
                                    const PipelineConfig& config) {
  if (i >= partitions.size()) throw std::out_of_range("pass2_score: index out of range");
  for (const auto& p : partitions) {
    if (!p.frozen) throw InvariantError("pass 2 started before every partition was frozen");
  }
  PrefixSum prefix = compute_prefix_cs(partitions, i, config.query_mode, config);
  SketchSet current(config.sketch_config(), config.relational);
  std::vector<ScoredEdge> out(events.size());
  if (prefix.mode() == QueryMode::merged) {
    SketchSet totals = std::move(prefix).release_merged();
    score_events(events, partitions[i].ticks, {}, totals, current, config, out.data());
  } else {
    SketchSet totals(config.sketch_config(), config.relational);
    score_events(events, partitions[i].ticks, prefix.parts(), totals, current, config,
                 out.data());
  }
  return out;
}

std::vector<ScoredEdge> run_pipeline(std::span<const EdgeEvent> events,
                                     const PipelineConfig& config, RunStats* stats) {
  config.validate();
  check_sorted(events);
  const auto run_start = Clock::now();

  const auto slices = partition_stream(events, config.num_partitions);
  const std::size_t k = slices.size();
  SketchAllocator allocator(config.sketch_config(), config.relational);

  std::vector<PartitionState> states;
  states.reserve(k);
  for (const auto& s : slices) states.emplace_back(s.id, s.ticks, allocator.make_persistent());

  std::mutex timing_mu;
  std::vector<TimingRecord> timings;
  auto record = [&](const char* phase, std::size_t partition, std::uint32_t worker, double ms) {
    if (!stats) return;
    std::lock_guard lock(timing_mu);
    timings.push_back({phase, static_cast<std::int64_t>(partition), worker, ms});
  };
  auto slice_events = [&](std::size_t i) {
    return events.subspan(slices[i].first, slices[i].size());
  };

  // Pass 1: each worker owns the partitions it claims.
  const auto pass1_start = Clock::now();
  detail::parallel_for(k, config.num_workers, [&](std::size_t i, std::uint32_t w) {
    const auto t0 = Clock::now();
    pass1_build_ce(states[i], slice_events(i), config, &allocator);
    record("pass1", i, w, millis_since(t0));
  });
  const double pass1_ms = millis_since(pass1_start);

  // Prefixes. Merged mode turns the CE slots into exclusive prefix sums in
  // place using one carry set: slot i <- carry, carry <- carry + CE_i.
  const auto prefix_start = Clock::now();
  std::vector<const SketchSet*> frozen_parts;
  if (config.query_mode == QueryMode::merged) {
    SketchSet carry = allocator.make_persistent();
    for (auto& state : states) {
      state.ce.merge(carry);
      std::swap(state.ce, carry);
    }
  } else {
    frozen_parts.reserve(k);
    for (const auto& state : states) frozen_parts.push_back(&state.ce);
  }
  const double prefix_ms = millis_since(prefix_start);

  // Pass 2: frozen sketches are shared read-only; working sets are per worker.
  const auto n_workers = static_cast<std::uint32_t>(
      std::min<std::size_t>(config.num_workers, std::max<std::size_t>(k, 1)));
  std::vector<SketchSet> current;
  std::vector<SketchSet> totals;
  current.reserve(n_workers);
  for (std::uint32_t w = 0; w < n_workers; ++w) current.push_back(allocator.make_scratch());
  if (config.query_mode == QueryMode::per_partition) {
    totals.reserve(n_workers);
    for (std::uint32_t w = 0; w < n_workers; ++w) totals.push_back(allocator.make_scratch());
  }

  std::vector<ScoredEdge> out(events.size());
  const auto pass2_start = Clock::now();
  detail::parallel_for(k, n_workers, [&](std::size_t i, std::uint32_t w) {
    const auto t0 = Clock::now();
    current[w].clear();
    const auto part = slice_events(i);
    ScoredEdge* dest = out.data() + slices[i].first;
    if (config.query_mode == QueryMode::merged) {
      score_events(part, slices[i].ticks, {}, states[i].ce, current[w], config, dest);
    } else {
      totals[w].clear();
      score_events(part, slices[i].ticks,
                   std::span<const SketchSet* const>(frozen_parts).first(i), totals[w],
                   current[w], config, dest);
    }
    record("pass2", i, w, millis_since(t0));
  });
  const double pass2_ms = millis_since(pass2_start);

  if (!std::is_sorted(out.begin(), out.end(), [](const ScoredEdge& a, const ScoredEdge& b) {
        return a.edge.seq < b.edge.seq;
      })) {
    std::sort(out.begin(), out.end(),
              [](const ScoredEdge& a, const ScoredEdge& b) { return a.edge.seq < b.edge.seq; });
  }

  if (stats) {
    stats->timings = std::move(timings);
    std::sort(stats->timings.begin(), stats->timings.end(),
              [](const TimingRecord& a, const TimingRecord& b) {
                return std::tie(a.phase, a.partition) < std::tie(b.phase, b.partition);
              });
    stats->pass1_millis = pass1_ms;
    stats->prefix_millis = prefix_ms;
    stats->pass2_millis = pass2_ms;
    stats->total_millis = millis_since(run_start);
    stats->timings.push_back({"pass1", -1, 0, pass1_ms});
    stats->timings.push_back({"prefix", -1, 0, prefix_ms});
    stats->timings.push_back({"pass2", -1, 0, pass2_ms});
    stats->timings.push_back({"total", -1, 0, stats->total_millis});
    stats->persistent_sketches = allocator.persistent_count();
    stats->scratch_sketches = allocator.scratch_count();
    stats->persistent_bytes = allocator.persistent_bytes();
    stats->scratch_bytes = allocator.scratch_bytes();
  }
  return out;
}

}  // namespace mdistrib
