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
#include <vector>

#include "mdistrib/sketch_key.hpp"

namespace mdistrib {

/// Interval estimate of a key's weight. point is the value used for scoring.
struct FrequencyEstimate {
  double lower = 0.0;
  double upper = 0.0;
  double point = 0.0;

  friend bool operator==(const FrequencyEstimate&, const FrequencyEstimate&) = default;
};

/// Misra-Gries style frequent-items sketch over a bounded open-addressing map.
///
/// The table has max_map_size slots (a power of two) and holds at most
/// floor(load_factor * max_map_size) entries. When an insertion pushes the
/// entry count past that capacity, the sketch purges: it takes the median of
/// up to kPurgeSampleSize stored weights, subtracts it from every entry,
/// drops entries that fall to zero or below, and adds the subtracted amount
/// to error_offset. Every key therefore satisfies
///   stored(k) <= true(k) <= stored(k) + error_offset.
class FrequentItemsSketch {
 public:
  static constexpr double kDefaultLoadFactor = 0.75;
  static constexpr std::size_t kPurgeSampleSize = 64;

  explicit FrequentItemsSketch(std::uint32_t max_map_size,
                               double load_factor = kDefaultLoadFactor);

  void update(const SketchKey& key, double delta = 1.0);
  FrequencyEstimate estimate(const SketchKey& key) const noexcept;

  /// Adds other's entries in its slot order, purging as needed, then adds
  /// its error offset. Throws std::invalid_argument on a configuration
  /// mismatch.
  void merge(const FrequentItemsSketch& other);
  void scale(double factor);
  void clear() noexcept;

  std::uint32_t max_map_size() const noexcept { return max_map_size_; }
  double load_factor() const noexcept { return load_factor_; }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return size_; }
  double error_offset() const noexcept { return error_offset_; }
  /// Total weight inserted (scaled along with the entries).
  double total_weight() const noexcept { return total_weight_; }
  std::size_t num_purges() const noexcept { return num_purges_; }
  std::size_t memory_bytes() const noexcept {
    return keys_.size() * sizeof(SketchKey) + weights_.size() * sizeof(double);
  }

  bool compatible(const FrequentItemsSketch& other) const noexcept {
    return max_map_size_ == other.max_map_size_ && load_factor_ == other.load_factor_;
  }

  /// Visits (key, stored weight) in table slot order.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      if (weights_[i] > 0.0) fn(keys_[i], weights_[i]);
    }
  }

  /// Rebuilds a sketch from snapshot fields.
  static FrequentItemsSketch restore(std::uint32_t max_map_size, double load_factor,
                                     double total_weight, double error_offset,
                                     const std::vector<std::pair<SketchKey, double>>& entries);

 private:
  std::size_t slot_of(const SketchKey& key) const noexcept;
  std::size_t find(const SketchKey& key) const noexcept;
  void insert_new(std::size_t slot, const SketchKey& key, double weight) noexcept;
  void purge();
  void rebuild(std::vector<std::pair<SketchKey, double>> survivors);

  std::uint32_t max_map_size_;
  double load_factor_;
  std::size_t capacity_;
  std::size_t size_ = 0;
  double error_offset_ = 0.0;
  double total_weight_ = 0.0;
  std::size_t num_purges_ = 0;
  // Empty slots carry weight 0; live entries always have weight > 0.
  std::vector<SketchKey> keys_;
  std::vector<double> weights_;
};

}  // namespace mdistrib
