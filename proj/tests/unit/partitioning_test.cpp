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

#include "mdistrib/partitioning.hpp"

#include <random>

#include <gtest/gtest.h>

#include "mdistrib/errors.hpp"
#include "oracles.hpp"

using mdistrib::EdgeEvent;
using mdistrib::partition_stream;
using mdistrib::TickRange;

namespace {

std::vector<EdgeEvent> one_per_tick(std::uint64_t ticks) {
  std::vector<EdgeEvent> ev;
  for (std::uint64_t t = 1; t <= ticks; ++t) ev.push_back({t, t + 1, t, t - 1});
  return ev;
}

}  // namespace

TEST(PartitioningTest, EvenSplit) {
  const auto ev = one_per_tick(10);
  const auto parts = partition_stream(ev, 2);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].ticks, (TickRange{1, 6}));
  EXPECT_EQ(parts[1].ticks, (TickRange{6, 11}));
  EXPECT_EQ(parts[0].size(), 5u);
  EXPECT_EQ(parts[1].first, 5u);
  EXPECT_EQ(parts[1].last, 10u);
}

TEST(PartitioningTest, SinglePartitionCoversAll) {
  const auto ev = one_per_tick(7);
  const auto parts = partition_stream(ev, 1);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0].ticks, (TickRange{1, 8}));
  EXPECT_EQ(parts[0].size(), 7u);
}

TEST(PartitioningTest, TickNeverSplit) {
  std::vector<EdgeEvent> ev;
  for (std::uint64_t i = 0; i < 9; ++i) ev.push_back({i, i + 1, 1, i});
  const auto parts = partition_stream(ev, 3);
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[0].ticks, (TickRange{1, 2}));
  EXPECT_EQ(parts[0].size(), 9u);
  EXPECT_TRUE(parts[1].ticks.empty());
  EXPECT_TRUE(parts[2].ticks.empty());
  EXPECT_EQ(parts[1].size(), 0u);
}

TEST(PartitioningTest, EmptyStream) {
  const auto parts = partition_stream({}, 3);
  ASSERT_EQ(parts.size(), 3u);
  for (const auto& p : parts) {
    EXPECT_EQ(p.size(), 0u);
    EXPECT_TRUE(p.ticks.empty());
  }
}

TEST(PartitioningTest, RejectsZeroPartitions) {
  EXPECT_THROW(partition_stream(one_per_tick(3), 0), mdistrib::ConfigError);
}

TEST(PartitioningTest, CheckSorted) {
  auto ev = one_per_tick(3);
  EXPECT_NO_THROW(mdistrib::check_sorted(ev));
  std::swap(ev[0], ev[1]);
  EXPECT_THROW(mdistrib::check_sorted(ev), mdistrib::ConfigError);
  std::vector<EdgeEvent> zero{{1, 2, 0, 0}};
  EXPECT_THROW(mdistrib::check_sorted(zero), mdistrib::ConfigError);
}

TEST(PartitioningTest, PropertyCoverage) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = rng() % 400;
    const auto ev = mdistrib::testing::random_events(n, 20, 1 + rng() % 60, rng());
    const std::uint32_t k = 1 + rng() % 16;
    const auto parts = partition_stream(ev, k);
    ASSERT_EQ(parts.size(), k);
    std::size_t pos = 0;
    std::uint64_t next_tick = n ? 1 : 0;
    for (std::uint32_t p = 0; p < k; ++p) {
      ASSERT_EQ(parts[p].id, p);
      ASSERT_EQ(parts[p].first, pos);
      ASSERT_LE(parts[p].first, parts[p].last);
      if (parts[p].size() > 0) {
        ASSERT_EQ(parts[p].ticks.begin, next_tick);
        next_tick = parts[p].ticks.end;
      }
      for (std::size_t i = parts[p].first; i < parts[p].last; ++i) {
        ASSERT_TRUE(parts[p].ticks.contains(ev[i].tick));
      }
      if (parts[p].last < n) ASSERT_FALSE(parts[p].ticks.contains(ev[parts[p].last].tick));
      pos = parts[p].last;
    }
    ASSERT_EQ(pos, n);
    // Pairwise disjoint tick ranges.
    for (std::uint32_t p = 0; p + 1 < k; ++p) {
      if (!parts[p].ticks.empty()) ASSERT_LE(parts[p].ticks.end, parts[p + 1].ticks.begin);
    }
  }
}
