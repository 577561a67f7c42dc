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
#include <functional>

namespace mdistrib {

using NodeId = std::uint64_t;

enum class KeyKind : std::uint8_t { edge = 0, node = 1 };

/// Key stored in a frequency sketch. Edge keys are directed, so
/// edge(u, v) and edge(v, u) are distinct keys. Node keys carry b = 0.
struct SketchKey {
  KeyKind kind = KeyKind::edge;
  NodeId a = 0;
  NodeId b = 0;

  static constexpr SketchKey edge(NodeId src, NodeId dst) noexcept {
    return {KeyKind::edge, src, dst};
  }
  static constexpr SketchKey node(NodeId n) noexcept {
    return {KeyKind::node, n, 0};
  }

  friend constexpr bool operator==(const SketchKey&, const SketchKey&) = default;
};

constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// Seeded 64-bit hash of the full (kind, a, b) key.
constexpr std::uint64_t hash_key(const SketchKey& key, std::uint64_t seed) noexcept {
  std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL * (1 + static_cast<std::uint64_t>(key.kind)));
  h = mix64(h ^ (key.a + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (key.b + 0x85157af5a2c6b2cfULL));
  return h;
}

}  // namespace mdistrib

template <>
struct std::hash<mdistrib::SketchKey> {
  std::size_t operator()(const mdistrib::SketchKey& key) const noexcept {
    return static_cast<std::size_t>(mdistrib::hash_key(key, 0));
  }
};
