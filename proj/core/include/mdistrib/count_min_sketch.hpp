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

#include "mdistrib/sketch_key.hpp"

namespace mdistrib {

/// Count-Min sketch with real-valued counters.
///
/// rows x buckets grid; row r hashes keys with seed master_seed + r, so two
/// sketches built from the same (rows, buckets, master_seed) address
/// identical cells and can be merged by pointwise addition. Counters are
/// doubles because decay multiplies them by fractional factors. Updates must
/// be non-negative, which keeps estimates one-sided (never below the true
/// weight of a key).
class CountMinSketch {
 public:
  CountMinSketch(std::uint32_t rows, std::uint32_t buckets, std::uint64_t master_seed);

  void update(const SketchKey& key, double delta = 1.0);
  double estimate(const SketchKey& key) const noexcept;

  /// Pointwise counter sum. Throws std::invalid_argument unless
  /// compatible(other).
  void merge(const CountMinSketch& other);
  void scale(double factor);
  void clear() noexcept;

  /// Sum of one row's counters (all rows carry the same mass).
  double total_mass() const noexcept;

  bool compatible(const CountMinSketch& other) const noexcept {
    return rows_ == other.rows_ && buckets_ == other.buckets_ &&
           master_seed_ == other.master_seed_;
  }

  std::size_t bucket_of(std::uint32_t row, const SketchKey& key) const noexcept {
    return static_cast<std::size_t>(hash_key(key, master_seed_ + row) % buckets_);
  }
  double counter(std::uint32_t row, std::size_t bucket) const noexcept {
    return counters_[static_cast<std::size_t>(row) * buckets_ + bucket];
  }
  std::span<const double> row(std::uint32_t r) const noexcept {
    return {counters_.data() + static_cast<std::size_t>(r) * buckets_, buckets_};
  }
  std::span<const double> counters() const noexcept { return counters_; }
  std::span<double> mutable_counters() noexcept { return counters_; }

  std::uint32_t rows() const noexcept { return rows_; }
  std::uint32_t buckets() const noexcept { return buckets_; }
  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::size_t memory_bytes() const noexcept { return counters_.size() * sizeof(double); }

  /// Counter-identical comparison (same shape, seed and every cell).
  friend bool operator==(const CountMinSketch&, const CountMinSketch&) = default;

 private:
  std::uint32_t rows_;
  std::uint32_t buckets_;
  std::uint64_t master_seed_;
  std::vector<double> counters_;
};

/// Returns a new sketch holding the pointwise sum of a and b.
CountMinSketch merged(const CountMinSketch& a, const CountMinSketch& b);

/// min over rows of the summed counters of several compatible sketches,
/// without materializing their merge. Equals merged(...).estimate(key).
double estimate_sum(std::span<const CountMinSketch* const> parts, const SketchKey& key);

}  // namespace mdistrib
