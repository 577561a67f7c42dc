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

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"

using mdistrib::FrequencyEstimate;
using mdistrib::FrequentItemsSketch;
using mdistrib::SketchKey;
using mdistrib::testing::ExactCounter;

namespace {

SketchKey key(std::uint64_t i) { return SketchKey::edge(i, i + 1); }

void expect_contains(const FrequentItemsSketch& s, const ExactCounter& exact) {
  for (const auto& [k, c] : exact.counts()) {
    const FrequencyEstimate e = s.estimate(k);
    ASSERT_LE(e.lower, c);
    ASSERT_GE(e.upper, c);
    ASSERT_DOUBLE_EQ(e.upper - e.lower, s.error_offset());
  }
}

}  // namespace

TEST(FrequentItemsSketchTest, Construction) {
  FrequentItemsSketch s(1024, 0.75);
  EXPECT_EQ(s.size(), 0u);
  EXPECT_EQ(s.error_offset(), 0.0);
  EXPECT_EQ(s.capacity(), 768u);

  FrequentItemsSketch tiny(2, 0.75);
  EXPECT_EQ(tiny.capacity(), 1u);

  EXPECT_THROW(FrequentItemsSketch(1023, 0.75), std::invalid_argument);
  EXPECT_THROW(FrequentItemsSketch(1, 0.75), std::invalid_argument);
  EXPECT_THROW(FrequentItemsSketch(64, 0.0), std::invalid_argument);
  EXPECT_THROW(FrequentItemsSketch(64, 1.0), std::invalid_argument);
}

TEST(FrequentItemsSketchTest, SmallestSketchPurgesOnSecondDistinctKey) {
  FrequentItemsSketch s(2, 0.75);
  s.update(key(1), 3);
  EXPECT_EQ(s.num_purges(), 0u);
  s.update(key(1), 1);
  EXPECT_EQ(s.num_purges(), 0u);
  s.update(key(2), 1);
  EXPECT_EQ(s.num_purges(), 1u);
  EXPECT_LT(s.size(), 2u);
}

TEST(FrequentItemsSketchTest, ExactBelowLoadThreshold) {
  FrequentItemsSketch s(1024);
  s.update(key(1), 2);
  s.update(key(2), 5);
  s.update(key(3), 1);
  EXPECT_EQ(s.error_offset(), 0.0);
  EXPECT_EQ(s.estimate(key(1)), (FrequencyEstimate{2, 2, 2}));
  EXPECT_EQ(s.estimate(key(2)), (FrequencyEstimate{5, 5, 5}));
  EXPECT_EQ(s.estimate(key(9)), (FrequencyEstimate{0, 0, 0}));
}

TEST(FrequentItemsSketchTest, HandTracedPurge) {
  // A(10), B(1), C(1) into a size-2 map (capacity 1):
  //   B overflows: lower median of {10, 1} is 1 -> A = 9, B evicted, offset 1
  //   C overflows: lower median of {9, 1} is 1 -> A = 8, C evicted, offset 2
  FrequentItemsSketch s(2, 0.75);
  s.update(key('A'), 10);
  s.update(key('B'), 1);
  s.update(key('C'), 1);
  EXPECT_EQ(s.error_offset(), 2.0);
  EXPECT_EQ(s.estimate(key('A')), (FrequencyEstimate{8, 10, 10}));
  EXPECT_GE(s.estimate(key('A')).upper, 10.0);
  EXPECT_EQ(s.estimate(key('B')), (FrequencyEstimate{0, 2, 2}));
}

TEST(FrequentItemsSketchTest, UniformStreamContainment) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> k(0, 4999);
  FrequentItemsSketch s(64);
  ExactCounter exact;
  for (int i = 0; i < 10000; ++i) {
    const auto kk = key(k(rng));
    s.update(kk);
    exact.add(kk);
    ASSERT_LT(s.size(), s.max_map_size());
  }
  EXPECT_GT(s.error_offset(), 0.0);
  expect_contains(s, exact);
}

TEST(FrequentItemsSketchTest, EstimateDefinition) {
  const auto s = FrequentItemsSketch::restore(16, 0.75, 20, 3, {{key(1), 12}});
  EXPECT_EQ(s.estimate(key(1)), (FrequencyEstimate{12, 15, 15}));
  EXPECT_EQ(s.estimate(key(2)), (FrequencyEstimate{0, 3, 3}));
}

TEST(FrequentItemsSketchTest, RejectsNegativeDelta) {
  FrequentItemsSketch s(16);
  EXPECT_THROW(s.update(key(1), -1), std::invalid_argument);
  s.update(key(1), 0);
  EXPECT_EQ(s.size(), 0u);
}

TEST(FrequentItemsSketchTest, MergeIdentityAndExactDisjoint) {
  FrequentItemsSketch a(64), b(64);
  for (int i = 0; i < 10; ++i) a.update(key(i), i + 1);
  for (int i = 10; i < 20; ++i) b.update(key(i), 2);

  FrequentItemsSketch id(64);
  id.merge(a);
  for (int i = 0; i < 30; ++i) EXPECT_EQ(id.estimate(key(i)), a.estimate(key(i)));

  a.merge(b);
  EXPECT_EQ(a.error_offset(), 0.0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.estimate(key(i)).point, i + 1);
  for (int i = 10; i < 20; ++i) EXPECT_EQ(a.estimate(key(i)).point, 2);
}

TEST(FrequentItemsSketchTest, MergePurgedSketchesContainment) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint32_t m = 1u << (1 + rng() % 7);
    FrequentItemsSketch a(m), b(m);
    ExactCounter exact;
    std::uniform_int_distribution<std::uint64_t> k(0, 300);
    std::geometric_distribution<int> skew(0.05);
    for (int i = 0; i < 2000; ++i) {
      const auto kk = key(i % 3 == 0 ? k(rng) : static_cast<std::uint64_t>(skew(rng)));
      (i % 2 ? a : b).update(kk);
      exact.add(kk);
    }
    a.merge(b);
    expect_contains(a, exact);
  }
}

TEST(FrequentItemsSketchTest, MergeRejectsMismatch) {
  FrequentItemsSketch a(64);
  EXPECT_THROW(a.merge(FrequentItemsSketch(128)), std::invalid_argument);
  EXPECT_THROW(a.merge(FrequentItemsSketch(64, 0.5)), std::invalid_argument);
}

TEST(FrequentItemsSketchTest, Scale) {
  auto s = FrequentItemsSketch::restore(16, 0.75, 12, 2, {{key(1), 10}});
  const auto before = s.estimate(key(1));
  s.scale(1.0);
  EXPECT_EQ(s.estimate(key(1)), before);
  s.scale(0.5);
  EXPECT_EQ(s.estimate(key(1)), (FrequencyEstimate{5, 6, 6}));
  s.scale(0.0);
  EXPECT_EQ(s.estimate(key(1)), (FrequencyEstimate{0, 0, 0}));
  EXPECT_EQ(s.size(), 0u);
  EXPECT_THROW(s.scale(2.0), std::invalid_argument);
}

TEST(FrequentItemsSketchTest, PropertyZeroErrorRegimeAndContainment) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint32_t m = 1u << (1 + rng() % 9);
    FrequentItemsSketch s(m);
    ExactCounter exact;
    const std::uint64_t keys = 1 + rng() % 2000;
    const int n = static_cast<int>(1 + rng() % 3000);
    std::size_t distinct = 0;
    for (int i = 0; i < n; ++i) {
      const auto kk = key(rng() % keys);
      if (exact.count(kk) == 0) ++distinct;
      s.update(kk);
      exact.add(kk);
      // Unit weights: N < load * M implies no purge has happened.
      if (static_cast<double>(i + 1) < s.load_factor() * m) ASSERT_EQ(s.error_offset(), 0.0);
      if (static_cast<double>(distinct) <= s.capacity()) ASSERT_EQ(s.error_offset(), 0.0);
      ASSERT_LT(s.size(), m);
    }
    expect_contains(s, exact);
    if (rng() % 2) {
      const double f = static_cast<double>(rng() % 1000) / 1000.0;
      const auto probe = key(rng() % keys);
      const auto before = s.estimate(probe);
      s.scale(f);
      const auto after = s.estimate(probe);
      EXPECT_DOUBLE_EQ(after.upper, f * before.upper);
      EXPECT_DOUBLE_EQ(after.lower, f * before.lower);
    }
  }
}
