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

#include "mdistrib/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "mdistrib/errors.hpp"
#include "mdistrib/score_io.hpp"

namespace mdistrib {

double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("roc_auc: scores and labels differ in length");
  }
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of (doubled) midranks of the positives.
  double rank_sum_x2 = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank_x2 = static_cast<double>(i + 1 + j);  // (i+1 + j) = 2 * mean rank
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]]) {
        rank_sum_x2 += midrank_x2;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw std::domain_error("AUC undefined: labels contain a single class");
  }
  const double p = static_cast<double>(positives);
  const double u = rank_sum_x2 / 2.0 - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

PhaseTiming summarize(std::vector<double> samples) {
  PhaseTiming t;
  if (!samples.empty()) {
    const double n = static_cast<double>(samples.size());
    t.mean_millis = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    if (samples.size() > 1) {
      double ss = 0.0;
      for (double s : samples) ss += (s - t.mean_millis) * (s - t.mean_millis);
      t.stddev_millis = std::sqrt(ss / (n - 1.0));
    }
  }
  t.samples = std::move(samples);
  return t;
}

EvalReport run_experiment(const LabeledStream& stream, const PipelineConfig& config, int repeats,
                          std::vector<ScoredEdge>* scores) {
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  if (stream.labels.size() != stream.events.size()) {
    throw ConfigError("stream has " + std::to_string(stream.labels.size()) + " labels for " +
                      std::to_string(stream.events.size()) + " events");
  }

  std::map<std::string, std::vector<double>> samples;
  std::vector<ScoredEdge> first;
  EvalReport report;
  for (int r = 0; r < repeats; ++r) {
    RunStats stats;
    auto result = run_pipeline(stream.events, config, &stats);
    samples["pass1"].push_back(stats.pass1_millis);
    samples["prefix"].push_back(stats.prefix_millis);
    samples["pass2"].push_back(stats.pass2_millis);
    samples["total"].push_back(stats.total_millis);
    report.peak_sketch_bytes = std::max(report.peak_sketch_bytes, stats.peak_sketch_bytes());
    report.persistent_sketches = stats.persistent_sketches;
    report.scratch_sketches = stats.scratch_sketches;
    if (r == 0) {
      first = std::move(result);
    } else if (score_digest(result) != score_digest(first)) {
      throw InvariantError("repeat " + std::to_string(r) + " produced different scores");
    }
  }

  // Scores come back in seq order; align labels by seq.
  std::vector<std::uint8_t> label_by_seq(stream.events.size(), 0);
  for (std::size_t i = 0; i < stream.events.size(); ++i) {
    const auto seq = stream.events[i].seq;
    if (seq >= label_by_seq.size()) throw ConfigError("event seq out of range");
    label_by_seq[seq] = stream.labels[i] != 0;
  }
  std::vector<double> values;
  std::vector<std::uint8_t> labels;
  values.reserve(first.size());
  labels.reserve(first.size());
  for (const auto& s : first) {
    values.push_back(s.score);
    labels.push_back(label_by_seq[s.edge.seq]);
  }

  report.auc = roc_auc(values, labels);
  report.num_events = stream.events.size();
  report.num_anomalies = stream.num_anomalies();
  report.repeats = repeats;
  for (auto& [phase, v] : samples) report.wall_millis_by_phase[phase] = summarize(std::move(v));
  if (scores) *scores = std::move(first);
  return report;
}

namespace {

struct PublishedAuc {
  std::string_view dataset;
  double cms_r;
  double fis_r;
};

constexpr PublishedAuc kPublished[] = {
    {"darpa", 0.953, 0.98},   {"cic-ddos", 0.986, 0.986}, {"cic-ids", 0.979, 0.96},
    {"ctu-13", 0.908, 0.92},  {"iscx-ids", 0.806, 0.93},
};

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

const char* variant_name(SketchVariant v) { return v == SketchVariant::cms ? "cms" : "fis"; }

}  // namespace

std::optional<double> reference_auc(std::string_view dataset, SketchVariant variant) {
  const std::string key = to_lower(dataset);
  for (const auto& p : kPublished) {
    if (p.dataset == key) return variant == SketchVariant::cms ? p.cms_r : p.fis_r;
  }
  return std::nullopt;
}

std::optional<std::string> reference_deviation(double auc, std::string_view dataset,
                                               SketchVariant variant, double tolerance) {
  const auto ref = reference_auc(dataset, variant);
  if (!ref || std::abs(auc - *ref) <= tolerance) return std::nullopt;
  return "warning: AUC " + format_double(auc) + " deviates from the published " +
         std::string(variant_name(variant)) + "-R value " + format_double(*ref) + " on " +
         std::string(dataset) + " by more than " + format_double(tolerance);
}

void write_report_jsonl(std::ostream& out, const EvalReport& report, const PipelineConfig& config,
                        std::string_view dataset) {
  nlohmann::json j;
  j["auc"] = report.auc;
  j["num_events"] = report.num_events;
  j["num_anomalies"] = report.num_anomalies;
  j["repeats"] = report.repeats;
  j["variant"] = variant_name(config.variant);
  j["relational"] = config.relational;
  j["partitions"] = config.num_partitions;
  j["workers"] = config.num_workers;
  j["seed"] = config.master_seed;
  j["peak_sketch_bytes"] = report.peak_sketch_bytes;
  j["persistent_sketches"] = report.persistent_sketches;
  j["scratch_sketches"] = report.scratch_sketches;
  if (!dataset.empty()) j["dataset"] = std::string(dataset);
  auto& phases = j["wall_millis_by_phase"];
  for (const auto& [phase, t] : report.wall_millis_by_phase) {
    phases[phase] = {{"mean", t.mean_millis}, {"stddev", t.stddev_millis}, {"samples", t.samples}};
  }
  out << j.dump() << '\n';
}

void write_report_csv_header(std::ostream& out) {
  out << "variant,relational,partitions,workers,auc,total_millis_mean,total_millis_stddev\n";
}

void write_report_csv_row(std::ostream& out, const EvalReport& report,
                          const PipelineConfig& config) {
  const auto it = report.wall_millis_by_phase.find("total");
  const PhaseTiming total = it == report.wall_millis_by_phase.end() ? PhaseTiming{} : it->second;
  out << variant_name(config.variant) << ',' << (config.relational ? 1 : 0) << ','
      << config.num_partitions << ',' << config.num_workers << ',' << format_double(report.auc)
      << ',' << format_double(total.mean_millis) << ',' << format_double(total.stddev_millis)
      << '\n';
}

}  // namespace mdistrib
