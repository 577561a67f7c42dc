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

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "mdistrib/errors.hpp"
#include "mdistrib/ingest.hpp"

namespace mdistrib {

namespace {

// Counter-based generator: each (seed, tick, draw) maps to an independent
// 64-bit value, so ticks can be generated in any order.
std::uint64_t draw(std::uint64_t seed, std::uint64_t tick, std::uint64_t index) {
  return mix64(mix64(seed ^ 0x5851f42d4c957f2dULL) + mix64(tick * 0x9e3779b97f4a7c15ULL + index));
}

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

std::uint64_t to_u64(std::string_view text, std::size_t line_no) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ConfigError("synthetic spec line " + std::to_string(line_no) + ": invalid integer '" +
                      std::string(text) + "'");
  }
  return v;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (num_nodes < 2) throw ConfigError("synthetic spec: num_nodes must be >= 2");
  if (num_ticks < 1) throw ConfigError("synthetic spec: num_ticks must be >= 1");
  for (const auto& b : bursts) {
    if (b.tick < 1 || b.tick > num_ticks) {
      throw ConfigError("synthetic spec: burst tick " + std::to_string(b.tick) +
                        " outside [1, num_ticks]");
    }
  }
}

std::uint64_t SyntheticSpec::expected_anomalies() const noexcept {
  std::uint64_t n = 0;
  for (const auto& b : bursts) n += b.num_targets * b.weight;
  return n;
}

SyntheticSpec parse_synthetic_spec(std::istream& in) {
  SyntheticSpec spec;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("synthetic spec line " + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = trim(text.substr(0, eq));
    const auto value = trim(text.substr(eq + 1));
    if (key == "num_nodes") {
      spec.num_nodes = to_u64(value, line_no);
    } else if (key == "num_ticks") {
      spec.num_ticks = to_u64(value, line_no);
    } else if (key == "base_rate") {
      spec.base_rate = to_u64(value, line_no);
    } else if (key == "rng_seed" || key == "seed") {
      spec.rng_seed = to_u64(value, line_no);
    } else if (key == "burst") {
      std::uint64_t f[4];
      std::string_view rest = value;
      for (int i = 0; i < 4; ++i) {
        const auto comma = rest.find(',');
        if ((i < 3) == (comma == std::string_view::npos)) {
          throw ConfigError("synthetic spec line " + std::to_string(line_no) +
                            ": burst needs tick,src,num_targets,weight");
        }
        f[i] = to_u64(rest.substr(0, comma), line_no);
        if (i < 3) rest = rest.substr(comma + 1);
      }
      spec.bursts.push_back({f[0], f[1], f[2], f[3]});
    } else {
      throw ConfigError("synthetic spec line " + std::to_string(line_no) + ": unknown key '" +
                        std::string(key) + "'");
    }
  }
  spec.validate();
  return spec;
}

SyntheticSpec parse_synthetic_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open synthetic spec " + path.string());
  return parse_synthetic_spec(in);
}

void write_synthetic_spec(const SyntheticSpec& spec, std::ostream& out) {
  out << "num_nodes=" << spec.num_nodes << '\n'
      << "num_ticks=" << spec.num_ticks << '\n'
      << "base_rate=" << spec.base_rate << '\n'
      << "rng_seed=" << spec.rng_seed << '\n';
  for (const auto& b : spec.bursts) {
    out << "burst=" << b.tick << ',' << b.src << ',' << b.num_targets << ',' << b.weight << '\n';
  }
}

LabeledStream generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  std::vector<std::uint64_t> ticks;
  std::vector<std::uint8_t> labels;
  pairs.reserve(spec.num_ticks * spec.base_rate + spec.expected_anomalies());

  auto bursts = spec.bursts;
  std::stable_sort(bursts.begin(), bursts.end(),
                   [](const BurstSpec& a, const BurstSpec& b) { return a.tick < b.tick; });
  auto next_burst = bursts.begin();
  std::uint64_t fresh = spec.num_nodes;

  for (std::uint64_t tick = 1; tick <= spec.num_ticks; ++tick) {
    for (std::uint64_t d = 0; d < spec.base_rate; ++d) {
      const std::uint64_t src = draw(spec.rng_seed, tick, 2 * d) % spec.num_nodes;
      std::uint64_t dst = draw(spec.rng_seed, tick, 2 * d + 1) % (spec.num_nodes - 1);
      if (dst >= src) ++dst;
      pairs.emplace_back(src, dst);
      ticks.push_back(tick);
      labels.push_back(0);
    }
    for (; next_burst != bursts.end() && next_burst->tick == tick; ++next_burst) {
      for (std::uint64_t target = 0; target < next_burst->num_targets; ++target) {
        const std::uint64_t dst = fresh++;
        for (std::uint64_t w = 0; w < next_burst->weight; ++w) {
          pairs.emplace_back(next_burst->src, dst);
          ticks.push_back(tick);
          labels.push_back(1);
        }
      }
    }
  }

  const auto ranks = dense_rank(ticks);
  NodeInterner interner;
  LabeledStream out;
  out.events.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    EdgeEvent ev;
    ev.src = interner.intern(std::to_string(pairs[i].first));
    ev.dst = interner.intern(std::to_string(pairs[i].second));
    ev.tick = ranks[i];
    ev.seq = i;
    out.events.push_back(ev);
  }
  out.labels = std::move(labels);
  out.node_names = std::move(interner).release();
  return out;
}

}  // namespace mdistrib
