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
#include <optional>
#include <span>
#include <variant>

#include "mdistrib/count_min_sketch.hpp"
#include "mdistrib/frequent_items_sketch.hpp"
#include "mdistrib/sketch_key.hpp"

namespace mdistrib {

enum class SketchVariant { cms, fis };

struct SketchConfig {
  SketchVariant variant = SketchVariant::cms;
  std::uint32_t rows = 2;
  std::uint32_t buckets = 719;
  std::uint64_t master_seed = 42;
  std::uint32_t max_map_size = 1024;
  double load_factor = FrequentItemsSketch::kDefaultLoadFactor;
};

/// Either backend behind the shared update/estimate/merge/scale/clear
/// contract. CMS estimates report lower == upper == point.
class FrequencySketch {
 public:
  explicit FrequencySketch(const SketchConfig& config);
  explicit FrequencySketch(CountMinSketch cms) : impl_(std::move(cms)) {}
  explicit FrequencySketch(FrequentItemsSketch fis) : impl_(std::move(fis)) {}

  void update(const SketchKey& key, double delta = 1.0);
  FrequencyEstimate estimate(const SketchKey& key) const;
  /// Throws std::invalid_argument on backend or configuration mismatch.
  void merge(const FrequencySketch& other);
  void scale(double factor);
  void clear();

  std::size_t memory_bytes() const noexcept;

  bool is_cms() const noexcept { return std::holds_alternative<CountMinSketch>(impl_); }
  const CountMinSketch& cms() const { return std::get<CountMinSketch>(impl_); }
  const FrequentItemsSketch& fis() const { return std::get<FrequentItemsSketch>(impl_); }

 private:
  std::variant<CountMinSketch, FrequentItemsSketch> impl_;
};

/// Estimate of key in the combination of several compatible sketches,
/// without merging them. CMS sums counters row by row before taking the
/// minimum (identical to the merged sketch's estimate); FIS adds the
/// per-sketch intervals.
FrequencyEstimate estimate_combined(std::span<const FrequencySketch* const> parts,
                                    const SketchKey& key);

/// The edge sketch plus, in relational mode, one sketch per endpoint role.
struct SketchSet {
  FrequencySketch edge;
  std::optional<FrequencySketch> src;
  std::optional<FrequencySketch> dst;

  SketchSet(const SketchConfig& config, bool with_nodes);

  bool has_nodes() const noexcept { return src.has_value(); }
  std::size_t sketch_count() const noexcept { return has_nodes() ? 3 : 1; }
  std::size_t memory_bytes() const noexcept;

  void merge(const SketchSet& other);
  void scale(double factor);
  void clear();
};

}  // namespace mdistrib
