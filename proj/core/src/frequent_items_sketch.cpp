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

#include "mdistrib/frequent_items_sketch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace mdistrib {

namespace {
constexpr std::uint64_t kTableSeed = 0x46495354ULL;
}  // namespace

FrequentItemsSketch::FrequentItemsSketch(std::uint32_t max_map_size, double load_factor)
    : max_map_size_(max_map_size), load_factor_(load_factor) {
  if (max_map_size < 2 || !std::has_single_bit(max_map_size)) {
    throw std::invalid_argument("FrequentItemsSketch: max_map_size must be a power of two >= 2");
  }
  if (!(load_factor > 0.0 && load_factor < 1.0)) {
    throw std::invalid_argument("FrequentItemsSketch: load_factor must be in (0, 1)");
  }
  capacity_ = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(load_factor * max_map_size)));
  keys_.resize(max_map_size);
  weights_.assign(max_map_size, 0.0);
}

std::size_t FrequentItemsSketch::slot_of(const SketchKey& key) const noexcept {
  return static_cast<std::size_t>(hash_key(key, kTableSeed)) & (max_map_size_ - 1);
}

// Slot holding key, or the empty slot where it would be inserted. The
// table always has at least one empty slot when this is called.
std::size_t FrequentItemsSketch::find(const SketchKey& key) const noexcept {
  const std::size_t mask = max_map_size_ - 1;
  std::size_t i = slot_of(key);
  while (weights_[i] > 0.0 && !(keys_[i] == key)) i = (i + 1) & mask;
  return i;
}

void FrequentItemsSketch::insert_new(std::size_t slot, const SketchKey& key,
                                     double weight) noexcept {
  keys_[slot] = key;
  weights_[slot] = weight;
  ++size_;
}

void FrequentItemsSketch::update(const SketchKey& key, double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("FrequentItemsSketch::update: delta must be finite and >= 0");
  }
  if (delta == 0.0) return;
  total_weight_ += delta;
  const std::size_t i = find(key);
  if (weights_[i] > 0.0) {
    weights_[i] += delta;
    return;
  }
  insert_new(i, key, delta);
  if (size_ > capacity_) purge();
}

FrequencyEstimate FrequentItemsSketch::estimate(const SketchKey& key) const noexcept {
  const std::size_t i = find(key);
  const double stored = weights_[i] > 0.0 ? weights_[i] : 0.0;
  const double upper = stored + error_offset_;
  return {stored, upper, upper};
}

void FrequentItemsSketch::purge() {
  std::vector<double> sample;
  sample.reserve(kPurgeSampleSize);
  for (std::size_t i = 0; i < weights_.size() && sample.size() < kPurgeSampleSize; ++i) {
    if (weights_[i] > 0.0) sample.push_back(weights_[i]);
  }
  // Lower median: at least one sampled entry is <= it, so each purge frees a slot.
  const auto mid = sample.begin() + static_cast<std::ptrdiff_t>((sample.size() - 1) / 2);
  std::nth_element(sample.begin(), mid, sample.end());
  const double cut = *mid;

  std::vector<std::pair<SketchKey, double>> survivors;
  survivors.reserve(size_);
  for_each([&](const SketchKey& k, double w) {
    if (w - cut > 0.0) survivors.emplace_back(k, w - cut);
  });
  error_offset_ += cut;
  ++num_purges_;
  rebuild(std::move(survivors));
}

void FrequentItemsSketch::rebuild(std::vector<std::pair<SketchKey, double>> survivors) {
  std::fill(weights_.begin(), weights_.end(), 0.0);
  size_ = 0;
  for (const auto& [k, w] : survivors) insert_new(find(k), k, w);
}

void FrequentItemsSketch::merge(const FrequentItemsSketch& other) {
  if (!compatible(other)) {
    throw std::invalid_argument("FrequentItemsSketch::merge: configuration mismatch");
  }
  // Snapshot first so self-merge is well defined.
  std::vector<std::pair<SketchKey, double>> incoming;
  incoming.reserve(other.size_);
  other.for_each([&](const SketchKey& k, double w) { incoming.emplace_back(k, w); });
  const double other_offset = other.error_offset_;
  const double other_total = other.total_weight_;
  for (const auto& [k, w] : incoming) update(k, w);
  // update() already counted the stored weights; add what other had purged.
  double stored = 0.0;
  for (const auto& e : incoming) stored += e.second;
  total_weight_ += other_total - stored;
  error_offset_ += other_offset;
}

void FrequentItemsSketch::scale(double factor) {
  if (!(factor >= 0.0 && factor <= 1.0)) {
    throw std::invalid_argument("FrequentItemsSketch::scale: factor must be in [0, 1]");
  }
  if (factor == 1.0) return;
  if (factor == 0.0) {
    clear();
    return;
  }
  std::vector<std::pair<SketchKey, double>> survivors;
  survivors.reserve(size_);
  bool underflow = false;
  for_each([&](const SketchKey& k, double w) {
    const double scaled = w * factor;
    if (scaled > 0.0) {
      survivors.emplace_back(k, scaled);
    } else {
      underflow = true;
    }
  });
  error_offset_ *= factor;
  total_weight_ *= factor;
  if (underflow) {
    rebuild(std::move(survivors));
  } else {
    for (double& w : weights_) w *= factor;
  }
}

void FrequentItemsSketch::clear() noexcept {
  std::fill(weights_.begin(), weights_.end(), 0.0);
  size_ = 0;
  error_offset_ = 0.0;
  total_weight_ = 0.0;
}

FrequentItemsSketch FrequentItemsSketch::restore(
    std::uint32_t max_map_size, double load_factor, double total_weight, double error_offset,
    const std::vector<std::pair<SketchKey, double>>& entries) {
  FrequentItemsSketch s(max_map_size, load_factor);
  if (entries.size() > s.capacity_) {
    throw std::invalid_argument("FrequentItemsSketch::restore: too many entries");
  }
  for (const auto& [k, w] : entries) {
    if (!(w > 0.0)) throw std::invalid_argument("FrequentItemsSketch::restore: bad weight");
    const std::size_t i = s.find(k);
    if (s.weights_[i] > 0.0) throw std::invalid_argument("FrequentItemsSketch::restore: duplicate key");
    s.insert_new(i, k, w);
  }
  s.error_offset_ = error_offset;
  s.total_weight_ = total_weight;
  return s;
}

}  // namespace mdistrib
