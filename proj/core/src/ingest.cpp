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

#include "mdistrib/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "mdistrib/errors.hpp"

namespace mdistrib {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
  throw IoError("line " + std::to_string(line_no) + ": " + what);
}

std::uint64_t parse_u64(std::string_view field, std::size_t line_no, const char* name) {
  std::uint64_t v = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    fail_line(line_no, std::string("invalid ") + name + " '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

std::size_t LabeledStream::num_anomalies() const noexcept {
  return static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(),
                                                [](std::uint8_t l) { return l != 0; }));
}

NodeId NodeInterner::intern(std::string_view token) {
  auto [it, inserted] = ids_.try_emplace(std::string(token), names_.size());
  if (inserted) names_.emplace_back(token);
  return it->second;
}

std::vector<std::uint64_t> dense_rank(const std::vector<std::uint64_t>& raw) {
  std::vector<std::uint64_t> distinct = raw;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::uint64_t> ranks(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    ranks[i] = static_cast<std::uint64_t>(
                   std::lower_bound(distinct.begin(), distinct.end(), raw[i]) - distinct.begin()) +
               1;
  }
  return ranks;
}

LabeledStream parse_edge_csv(std::istream& edges, std::istream* labels,
                             const EdgeCsvSchema& schema) {
  NodeInterner interner;
  std::vector<EdgeEvent> records;
  std::vector<std::uint64_t> raw_ticks;
  std::vector<std::size_t> line_of;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(edges, line)) {
    ++line_no;
    if (schema.has_header && line_no == 1) continue;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    const auto c1 = text.find(schema.delimiter);
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(schema.delimiter, c1 + 1);
    if (c2 == std::string_view::npos || text.find(schema.delimiter, c2 + 1) != std::string_view::npos) {
      fail_line(line_no, "expected 3 fields src,dst,timestamp");
    }
    const auto src = trim(text.substr(0, c1));
    const auto dst = trim(text.substr(c1 + 1, c2 - c1 - 1));
    const auto ts = trim(text.substr(c2 + 1));
    if (src.empty() || dst.empty()) fail_line(line_no, "empty node id");
    const std::uint64_t raw = parse_u64(ts, line_no, "timestamp");
    EdgeEvent ev;
    ev.src = interner.intern(src);
    ev.dst = interner.intern(dst);
    ev.seq = records.size();
    records.push_back(ev);
    raw_ticks.push_back(raw);
  }
  if (edges.bad()) throw IoError("read error on edge input");

  const auto ranks = dense_rank(raw_ticks);
  for (std::size_t i = 0; i < records.size(); ++i) records[i].tick = ranks[i];

  LabeledStream out;
  std::vector<std::uint8_t> labels_by_seq(records.size(), 0);
  if (labels) {
    std::size_t n = 0;
    std::size_t label_line = 0;
    while (std::getline(*labels, line)) {
      ++label_line;
      const std::string_view text = trim(line);
      if (text.empty()) continue;
      if (n >= records.size()) {
        throw IoError("label file has more labels than edge records (" +
                      std::to_string(records.size()) + ")");
      }
      labels_by_seq[n++] = parse_u64(text, label_line, "label") != 0 ? 1 : 0;
    }
    if (n != records.size()) {
      throw IoError("label count " + std::to_string(n) + " does not match edge count " +
                    std::to_string(records.size()));
    }
  }

  std::stable_sort(records.begin(), records.end(),
                   [](const EdgeEvent& a, const EdgeEvent& b) { return a.tick < b.tick; });
  out.labels.reserve(records.size());
  for (const auto& ev : records) out.labels.push_back(labels_by_seq[ev.seq]);
  out.events = std::move(records);
  out.node_names = std::move(interner).release();
  return out;
}

LabeledStream parse_edge_csv(const std::filesystem::path& edges,
                             const std::optional<std::filesystem::path>& labels,
                             const EdgeCsvSchema& schema) {
  std::ifstream in(edges);
  if (!in) throw IoError("cannot open edge file " + edges.string());
  std::ifstream label_in;
  if (labels) {
    label_in.open(*labels);
    if (!label_in) throw IoError("cannot open label file " + labels->string());
  }
  return parse_edge_csv(in, labels ? &label_in : nullptr, schema);
}

void write_edge_csv(const LabeledStream& stream, std::ostream& edges, std::ostream* labels) {
  std::vector<std::size_t> order(stream.events.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return stream.events[a].seq < stream.events[b].seq;
  });
  auto name = [&](NodeId id) -> std::string {
    return id < stream.node_names.size() ? stream.node_names[id] : std::to_string(id);
  };
  for (std::size_t i : order) {
    const auto& ev = stream.events[i];
    edges << name(ev.src) << ',' << name(ev.dst) << ',' << ev.tick << '\n';
    if (labels) *labels << static_cast<int>(stream.labels.at(i)) << '\n';
  }
  if (!edges || (labels && !*labels)) throw IoError("write error on edge output");
}

}  // namespace mdistrib
