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

#include "mdistrib/count_min_sketch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mdistrib {

CountMinSketch::CountMinSketch(std::uint32_t rows, std::uint32_t buckets,
                               std::uint64_t master_seed)
    : rows_(rows), buckets_(buckets), master_seed_(master_seed) {
  if (rows == 0 || buckets == 0) {
    throw std::invalid_argument("CountMinSketch: rows and buckets must be positive");
  }
  counters_.assign(static_cast<std::size_t>(rows) * buckets, 0.0);
}

void CountMinSketch::update(const SketchKey& key, double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("CountMinSketch::update: delta must be finite and >= 0");
  }
  for (std::uint32_t r = 0; r < rows_; ++r) {
    counters_[static_cast<std::size_t>(r) * buckets_ + bucket_of(r, key)] += delta;
  }
}

double CountMinSketch::estimate(const SketchKey& key) const noexcept {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t r = 0; r < rows_; ++r) {
    best = std::min(best, counter(r, bucket_of(r, key)));
  }
  return best;
}

void CountMinSketch::merge(const CountMinSketch& other) {
  if (!compatible(other)) {
    throw std::invalid_argument("CountMinSketch::merge: dimension or seed mismatch");
  }
  std::transform(counters_.begin(), counters_.end(), other.counters_.begin(),
                 counters_.begin(), std::plus<>{});
}

void CountMinSketch::scale(double factor) {
  if (!(factor >= 0.0 && factor <= 1.0)) {
    throw std::invalid_argument("CountMinSketch::scale: factor must be in [0, 1]");
  }
  if (factor == 1.0) return;
  if (factor == 0.0) {
    clear();
    return;
  }
  for (double& c : counters_) c *= factor;
}

void CountMinSketch::clear() noexcept { std::fill(counters_.begin(), counters_.end(), 0.0); }

double CountMinSketch::total_mass() const noexcept {
  const auto first = row(0);
  return std::accumulate(first.begin(), first.end(), 0.0);
}

CountMinSketch merged(const CountMinSketch& a, const CountMinSketch& b) {
  CountMinSketch out = a;
  out.merge(b);
  return out;
}

double estimate_sum(std::span<const CountMinSketch* const> parts, const SketchKey& key) {
  if (parts.empty()) return 0.0;
  const CountMinSketch& head = *parts.front();
  for (const auto* p : parts) {
    if (!head.compatible(*p)) {
      throw std::invalid_argument("estimate_sum: dimension or seed mismatch");
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t r = 0; r < head.rows(); ++r) {
    const std::size_t b = head.bucket_of(r, key);
    double sum = 0.0;
    for (const auto* p : parts) sum += p->counter(r, b);
    best = std::min(best, sum);
  }
  return best;
}

}  // namespace mdistrib
