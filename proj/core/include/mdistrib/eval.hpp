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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdistrib/ingest.hpp"
#include "mdistrib/pipeline.hpp"

namespace mdistrib {

/// Mann-Whitney estimate of ROC-AUC: P(score_pos > score_neg) plus half the
/// probability of a tie, using midranks. Throws std::invalid_argument on a
/// length mismatch and std::domain_error when only one class is present.
double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct PhaseTiming {
  double mean_millis = 0.0;
  double stddev_millis = 0.0;  // sample standard deviation; 0 for one sample
  std::vector<double> samples;
};

PhaseTiming summarize(std::vector<double> samples);

struct EvalReport {
  double auc = 0.0;
  std::size_t num_events = 0;
  std::size_t num_anomalies = 0;
  int repeats = 0;
  std::map<std::string, PhaseTiming> wall_millis_by_phase;
  std::uint64_t peak_sketch_bytes = 0;
  std::uint64_t persistent_sketches = 0;
  std::uint64_t scratch_sketches = 0;
};

/// Runs the pipeline `repeats` times, checks that every run produced the same
/// scores (InvariantError otherwise), and reports the AUC once together with
/// per-phase timing statistics. Optionally hands back the scores.
EvalReport run_experiment(const LabeledStream& stream, const PipelineConfig& config, int repeats,
                          std::vector<ScoredEdge>* scores = nullptr);

/// Published AUC for the relational CMS/FIS variants on a named dataset
/// (darpa, cic-ddos, cic-ids, ctu-13, iscx-ids).
std::optional<double> reference_auc(std::string_view dataset, SketchVariant variant);

/// Warning text when |auc - reference| exceeds tolerance; nullopt otherwise
/// or when the dataset is unknown.
std::optional<std::string> reference_deviation(double auc, std::string_view dataset,
                                               SketchVariant variant, double tolerance = 0.03);

/// One JSON object per line.
void write_report_jsonl(std::ostream& out, const EvalReport& report, const PipelineConfig& config,
                        std::string_view dataset = {});

/// Plot-ready AUC-vs-running-time rows.
void write_report_csv_header(std::ostream& out);
void write_report_csv_row(std::ostream& out, const EvalReport& report, const PipelineConfig& config);

}  // namespace mdistrib
