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

#include "mdistrib/score_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <ostream>

#include "mdistrib/errors.hpp"

namespace mdistrib {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

void write_scores_csv(std::ostream& out, std::span<const ScoredEdge> scores) {
  out << "seq,src,dst,tick,score,edge_score,src_score,dst_score\n";
  for (const auto& s : scores) {
    out << s.edge.seq << ',' << s.edge.src << ',' << s.edge.dst << ',' << s.edge.tick << ','
        << format_double(s.score) << ',' << format_double(s.components.edge) << ','
        << format_double(s.components.src) << ',' << format_double(s.components.dst) << '\n';
  }
  if (!out) throw IoError("write error on score output");
}

void write_timing_csv(std::ostream& out, const RunStats& stats) {
  out << "phase,partition,worker,millis\n";
  for (const auto& t : stats.timings) {
    out << t.phase << ',' << t.partition << ',' << t.worker << ',' << format_double(t.millis)
        << '\n';
  }
  if (!out) throw IoError("write error on timing output");
}

void write_node_map(std::ostream& out, const std::vector<std::string>& names) {
  out << "id,name\n";
  for (std::size_t i = 0; i < names.size(); ++i) out << i << ',' << names[i] << '\n';
  if (!out) throw IoError("write error on node map output");
}

std::uint64_t score_digest(std::span<const ScoredEdge> scores) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& s : scores) {
    feed(s.edge.seq);
    feed(std::bit_cast<std::uint64_t>(s.score));
    feed(std::bit_cast<std::uint64_t>(s.components.edge));
    feed(std::bit_cast<std::uint64_t>(s.components.src));
    feed(std::bit_cast<std::uint64_t>(s.components.dst));
  }
  return h;
}

}  // namespace mdistrib
