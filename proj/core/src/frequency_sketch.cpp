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

#include "mdistrib/frequency_sketch.hpp"

#include <stdexcept>
#include <vector>

namespace mdistrib {

namespace {

std::variant<CountMinSketch, FrequentItemsSketch> make_impl(const SketchConfig& c) {
  if (c.variant == SketchVariant::cms) return CountMinSketch(c.rows, c.buckets, c.master_seed);
  return FrequentItemsSketch(c.max_map_size, c.load_factor);
}

}  // namespace

FrequencySketch::FrequencySketch(const SketchConfig& config) : impl_(make_impl(config)) {}

void FrequencySketch::update(const SketchKey& key, double delta) {
  std::visit([&](auto& s) { s.update(key, delta); }, impl_);
}

FrequencyEstimate FrequencySketch::estimate(const SketchKey& key) const {
  if (const auto* c = std::get_if<CountMinSketch>(&impl_)) {
    const double e = c->estimate(key);
    return {e, e, e};
  }
  return std::get<FrequentItemsSketch>(impl_).estimate(key);
}

void FrequencySketch::merge(const FrequencySketch& other) {
  if (impl_.index() != other.impl_.index()) {
    throw std::invalid_argument("FrequencySketch::merge: backend mismatch");
  }
  std::visit(
      [&](auto& s) {
        using T = std::decay_t<decltype(s)>;
        s.merge(std::get<T>(other.impl_));
      },
      impl_);
}

void FrequencySketch::scale(double factor) {
  std::visit([&](auto& s) { s.scale(factor); }, impl_);
}

void FrequencySketch::clear() {
  std::visit([](auto& s) { s.clear(); }, impl_);
}

std::size_t FrequencySketch::memory_bytes() const noexcept {
  return std::visit([](const auto& s) { return s.memory_bytes(); }, impl_);
}

FrequencyEstimate estimate_combined(std::span<const FrequencySketch* const> parts,
                                    const SketchKey& key) {
  if (parts.empty()) return {};
  if (parts.front()->is_cms()) {
    thread_local std::vector<const CountMinSketch*> cms;
    cms.clear();
    for (const auto* p : parts) {
      if (!p->is_cms()) throw std::invalid_argument("estimate_combined: backend mismatch");
      cms.push_back(&p->cms());
    }
    const double e = estimate_sum(cms, key);
    return {e, e, e};
  }
  FrequencyEstimate total;
  for (const auto* p : parts) {
    if (p->is_cms()) throw std::invalid_argument("estimate_combined: backend mismatch");
    const FrequencyEstimate e = p->estimate(key);
    total.lower += e.lower;
    total.upper += e.upper;
    total.point += e.point;
  }
  return total;
}

SketchSet::SketchSet(const SketchConfig& config, bool with_nodes) : edge(config) {
  if (with_nodes) {
    src.emplace(config);
    dst.emplace(config);
  }
}

std::size_t SketchSet::memory_bytes() const noexcept {
  std::size_t bytes = edge.memory_bytes();
  if (src) bytes += src->memory_bytes();
  if (dst) bytes += dst->memory_bytes();
  return bytes;
}

void SketchSet::merge(const SketchSet& other) {
  if (has_nodes() != other.has_nodes()) {
    throw std::invalid_argument("SketchSet::merge: node sketch mismatch");
  }
  edge.merge(other.edge);
  if (src) {
    src->merge(*other.src);
    dst->merge(*other.dst);
  }
}

void SketchSet::scale(double factor) {
  edge.scale(factor);
  if (src) {
    src->scale(factor);
    dst->scale(factor);
  }
}

void SketchSet::clear() {
  edge.clear();
  if (src) {
    src->clear();
    dst->clear();
  }
}

}  // namespace mdistrib
