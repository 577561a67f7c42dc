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

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <vector>

#include "mdistrib/errors.hpp"

namespace mdistrib::snapshot {

namespace {

constexpr std::array<char, 4> kMagic{'M', 'D', 'S', 'K'};
constexpr std::uint64_t kNodeBit = 1ULL << 63;

template <typename U>
void put_uint(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  out.write(bytes.data(), bytes.size());
}

void put_f64(std::ostream& out, double v) { put_uint(out, std::bit_cast<std::uint64_t>(v)); }

template <typename U>
U get_uint(std::istream& in) {
  std::array<unsigned char, sizeof(U)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw IoError("sketch snapshot: truncated input");
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_uint<std::uint64_t>(in)); }

void put_header(std::ostream& out, std::uint8_t kind, std::uint32_t rows, std::uint32_t width,
                std::uint64_t seed) {
  out.write(kMagic.data(), kMagic.size());
  put_uint(out, kVersion);
  put_uint(out, kind);
  put_uint(out, rows);
  put_uint(out, width);
  put_uint(out, seed);
}

}  // namespace

void write(std::ostream& out, const CountMinSketch& sketch) {
  put_header(out, 0, sketch.rows(), sketch.buckets(), sketch.master_seed());
  for (double c : sketch.counters()) put_f64(out, c);
  if (!out) throw IoError("sketch snapshot: write failed");
}

void write(std::ostream& out, const FrequentItemsSketch& sketch) {
  put_header(out, 1, 0, sketch.max_map_size(), 0);
  put_f64(out, sketch.load_factor());
  put_f64(out, sketch.total_weight());
  put_uint(out, static_cast<std::uint32_t>(sketch.size()));
  sketch.for_each([&](const SketchKey& k, double w) {
    if ((k.a & kNodeBit) || (k.b & kNodeBit)) {
      throw IoError("sketch snapshot: node id exceeds 63 bits");
    }
    put_uint(out, k.a);
    put_uint(out, k.b | (k.kind == KeyKind::node ? kNodeBit : 0));
    put_f64(out, w);
  });
  put_f64(out, sketch.error_offset());
  if (!out) throw IoError("sketch snapshot: write failed");
}

std::variant<CountMinSketch, FrequentItemsSketch> read(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw IoError("sketch snapshot: bad magic");
  const auto version = get_uint<std::uint16_t>(in);
  if (version != kVersion) throw IoError("sketch snapshot: unsupported version");
  const auto kind = get_uint<std::uint8_t>(in);
  const auto rows = get_uint<std::uint32_t>(in);
  const auto width = get_uint<std::uint32_t>(in);
  const auto seed = get_uint<std::uint64_t>(in);

  try {
    if (kind == 0) {
      CountMinSketch s(rows, width, seed);
      for (double& c : s.mutable_counters()) {
        c = get_f64(in);
        if (!(c >= 0.0)) throw IoError("sketch snapshot: negative counter");
      }
      return s;
    }
    if (kind == 1) {
      const double load_factor = get_f64(in);
      const double total_weight = get_f64(in);
      const auto count = get_uint<std::uint32_t>(in);
      if (count > width) throw IoError("sketch snapshot: entry count exceeds map size");
      std::vector<std::pair<SketchKey, double>> entries;
      entries.reserve(count);
      for (std::uint32_t i = 0; i < count; ++i) {
        const auto a = get_uint<std::uint64_t>(in);
        const auto b = get_uint<std::uint64_t>(in);
        const double w = get_f64(in);
        const KeyKind k = (b & kNodeBit) ? KeyKind::node : KeyKind::edge;
        entries.emplace_back(SketchKey{k, a, b & ~kNodeBit}, w);
      }
      const double offset = get_f64(in);
      return FrequentItemsSketch::restore(width, load_factor, total_weight, offset, entries);
    }
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("sketch snapshot: ") + e.what());
  }
  throw IoError("sketch snapshot: unknown sketch kind");
}

}  // namespace mdistrib::snapshot
