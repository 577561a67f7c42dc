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

#include "mdistrib/sketch_snapshot.hpp"

#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "mdistrib/errors.hpp"

namespace snapshot = mdistrib::snapshot;
using mdistrib::CountMinSketch;
using mdistrib::FrequentItemsSketch;
using mdistrib::SketchKey;

TEST(SketchSnapshotTest, CountMinRoundTrip) {
  CountMinSketch s(3, 97, 7);
  for (int i = 0; i < 500; ++i) s.update(SketchKey::edge(i % 41, i % 13), 0.25 * (i % 5));
  s.update(SketchKey::node(3), 2.5);
  std::stringstream buf;
  snapshot::write(buf, s);
  const auto back = snapshot::read(buf);
  ASSERT_TRUE(std::holds_alternative<CountMinSketch>(back));
  EXPECT_EQ(std::get<CountMinSketch>(back), s);
}

TEST(SketchSnapshotTest, FrequentItemsRoundTrip) {
  FrequentItemsSketch s(16, 0.5);
  for (int i = 0; i < 200; ++i) s.update(SketchKey::edge(i % 23, 1), 1 + i % 3);
  s.update(SketchKey::node(5), 4);
  std::stringstream buf;
  snapshot::write(buf, s);
  const auto back = snapshot::read(buf);
  ASSERT_TRUE(std::holds_alternative<FrequentItemsSketch>(back));
  const auto& r = std::get<FrequentItemsSketch>(back);
  EXPECT_EQ(r.max_map_size(), 16u);
  EXPECT_EQ(r.load_factor(), 0.5);
  EXPECT_EQ(r.error_offset(), s.error_offset());
  EXPECT_EQ(r.total_weight(), s.total_weight());
  EXPECT_EQ(r.size(), s.size());
  for (int i = 0; i < 30; ++i) {
    EXPECT_EQ(r.estimate(SketchKey::edge(i, 1)), s.estimate(SketchKey::edge(i, 1)));
  }
  EXPECT_EQ(r.estimate(SketchKey::node(5)), s.estimate(SketchKey::node(5)));
  EXPECT_EQ(r.estimate(SketchKey::node(5)).lower > 0,
            s.estimate(SketchKey::node(5)).lower > 0);
}

TEST(SketchSnapshotTest, HeaderLayout) {
  CountMinSketch s(2, 5, 0x0102030405060708ULL);
  std::stringstream buf;
  snapshot::write(buf, s);
  const std::string bytes = buf.str();
  ASSERT_EQ(bytes.size(), 4u + 2 + 1 + 4 + 4 + 8 + 2 * 5 * 8);
  EXPECT_EQ(bytes.substr(0, 4), "MDSK");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 0);
  EXPECT_EQ(bytes[6], 0);
  EXPECT_EQ(bytes[7], 2);
  EXPECT_EQ(bytes[11], 5);
  EXPECT_EQ(bytes[15], 0x08);
  EXPECT_EQ(bytes[22], 0x01);
}

TEST(SketchSnapshotTest, RejectsTruncatedInput) {
  FrequentItemsSketch s(8);
  s.update(SketchKey::edge(1, 2), 3);
  std::stringstream buf;
  snapshot::write(buf, s);
  const std::string bytes = buf.str();
  for (std::size_t cut : {std::size_t{0}, std::size_t{3}, std::size_t{10}, bytes.size() - 1}) {
    std::istringstream in(bytes.substr(0, cut));
    EXPECT_THROW(snapshot::read(in), mdistrib::IoError) << cut;
  }
}

TEST(SketchSnapshotTest, RejectsBadMagicAndVersion) {
  CountMinSketch s(1, 4, 0);
  std::stringstream buf;
  snapshot::write(buf, s);
  std::string bytes = buf.str();
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  std::istringstream in1(bad_magic);
  EXPECT_THROW(snapshot::read(in1), mdistrib::IoError);
  std::string bad_version = bytes;
  bad_version[4] = 9;
  std::istringstream in2(bad_version);
  EXPECT_THROW(snapshot::read(in2), mdistrib::IoError);
}
