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

// mdistrib command-line tool: score, eval, synth, bench.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mdistrib/errors.hpp"
#include "mdistrib/eval.hpp"
#include "mdistrib/ingest.hpp"
#include "mdistrib/pipeline.hpp"
#include "mdistrib/score_io.hpp"

namespace fs = std::filesystem;
using namespace mdistrib;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitInternal = 3;

struct Common {
  PipelineConfig config;
  std::string input;
  std::string labels;
  bool header = false;
};

void add_pipeline_flags(CLI::App& cmd, PipelineConfig& c) {
  const std::map<std::string, SketchVariant> variants{{"cms", SketchVariant::cms},
                                                      {"fis", SketchVariant::fis}};
  const std::map<std::string, DecayMode> decay{{"constant", DecayMode::constant},
                                               {"inverse_tick", DecayMode::inverse_tick}};
  const std::map<std::string, QueryMode> modes{{"merged", QueryMode::merged},
                                               {"per_partition", QueryMode::per_partition}};
  cmd.add_option("--variant", c.variant, "Sketch backend: cms or fis")
      ->transform(CLI::CheckedTransformer(variants, CLI::ignore_case))
      ->default_str("cms");
  cmd.add_flag("--relational,!--no-relational", c.relational,
               "Score max(edge, src, dst) with decayed current-tick sketches")
      ->default_str("true");
  cmd.add_option("--rows", c.rows, "CMS hash rows")->capture_default_str()->check(CLI::PositiveNumber);
  cmd.add_option("--buckets", c.buckets, "CMS buckets per row")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--max-map-size", c.max_map_size, "FIS map size (power of two)")
      ->capture_default_str();
  cmd.add_option("--load-factor", c.load_factor, "FIS load factor in (0, 1)")
      ->capture_default_str();
  cmd.add_option("--partitions", c.num_partitions, "Number of tick partitions K")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--workers", c.num_workers, "Worker threads (default from MDISTRIB_WORKERS)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--alpha", c.alpha, "Decay factor in (0, 1]")->capture_default_str();
  cmd.add_option("--decay-mode", c.decay_mode, "constant or inverse_tick")
      ->transform(CLI::CheckedTransformer(decay, CLI::ignore_case))
      ->default_str("constant");
  cmd.add_option("--query-mode", c.query_mode, "merged or per_partition")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case))
      ->default_str("merged");
  cmd.add_option("--seed", c.master_seed, "Master hash seed")->capture_default_str();
  cmd.add_option("--shards", c.pass1_shards, "Pass-1 sub-shards per partition")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

void add_input_flags(CLI::App& cmd, Common& common, bool labels_required) {
  cmd.add_option("--input", common.input, "Edge CSV: src,dst,timestamp")
      ->required()
      ->check(CLI::ExistingFile);
  auto* labels = cmd.add_option("--labels", common.labels, "One 0/1 label per edge line")
                     ->check(CLI::ExistingFile);
  if (labels_required) labels->required();
  cmd.add_flag("--header", common.header, "Skip the first line of the edge CSV");
}

LabeledStream load(const Common& common) {
  std::optional<fs::path> labels;
  if (!common.labels.empty()) labels = common.labels;
  return parse_edge_csv(fs::path(common.input), labels, EdgeCsvSchema{',', common.header});
}

// Writes via a temporary sibling and renames, so readers never see a
// partial file.
void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path == "-") {
    body(std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("write error on stdout");
    return;
  }
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    body(out);
    out.flush();
    if (!out) throw IoError("write error on " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
  }
}

std::vector<std::uint64_t> parse_size_list(const std::string& text, const char* what) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || item.empty() || v == 0) {
      throw ConfigError(std::string("invalid ") + what + " entry '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(std::string(what) + " must not be empty");
  return out;
}

int run_score(const Common& common, const std::string& output, const std::string& timing,
              const std::string& node_map) {
  const auto stream = load(common);
  RunStats stats;
  const auto scores = run_pipeline(stream.events, common.config, &stats);
  write_file(output, [&](std::ostream& out) { write_scores_csv(out, scores); });
  if (!timing.empty()) write_file(timing, [&](std::ostream& out) { write_timing_csv(out, stats); });
  if (!node_map.empty()) {
    write_file(node_map, [&](std::ostream& out) { write_node_map(out, stream.node_names); });
  }
  return kExitOk;
}

int run_eval(const Common& common, int repeats, const std::string& jsonl, const std::string& csv,
             const std::string& dataset, const std::string& output) {
  const auto stream = load(common);
  std::vector<ScoredEdge> scores;
  const auto report = run_experiment(stream, common.config, repeats, &scores);

  std::cout << "events " << report.num_events << ", anomalies " << report.num_anomalies
            << ", repeats " << report.repeats << '\n';
  std::cout << "auc " << format_double(report.auc) << '\n';
  for (const auto& [phase, t] : report.wall_millis_by_phase) {
    std::cout << phase << "_ms mean " << format_double(t.mean_millis) << " stddev "
              << format_double(t.stddev_millis) << '\n';
  }
  std::cout << "sketches persistent " << report.persistent_sketches << ", scratch "
            << report.scratch_sketches << ", peak bytes " << report.peak_sketch_bytes << '\n';
  if (!dataset.empty()) {
    const auto ref = reference_auc(dataset, common.config.variant);
    if (!ref) {
      std::cerr << "warning: no reference AUC for dataset '" << dataset << "'\n";
    } else if (!common.config.relational) {
      std::cerr << "warning: reference AUCs are for the relational variants\n";
    }
    if (const auto warn = reference_deviation(report.auc, dataset, common.config.variant)) {
      std::cerr << "warning: " << *warn << '\n';
    }
  }

  if (!jsonl.empty()) {
    write_file(jsonl, [&](std::ostream& out) {
      write_report_jsonl(out, report, common.config, dataset);
    });
  }
  if (!csv.empty()) {
    write_file(csv, [&](std::ostream& out) {
      write_report_csv_header(out);
      write_report_csv_row(out, report, common.config);
    });
  }
  if (!output.empty()) write_file(output, [&](std::ostream& out) { write_scores_csv(out, scores); });
  return kExitOk;
}

int run_synth(const std::string& spec_path, const std::string& edges, const std::string& labels) {
  const auto spec = parse_synthetic_spec(fs::path(spec_path));
  const auto stream = generate_synthetic(spec);
  std::ostringstream e;
  std::ostringstream l;
  write_edge_csv(stream, e, &l);
  write_file(edges, [&](std::ostream& out) { out << e.str(); });
  write_file(labels, [&](std::ostream& out) { out << l.str(); });
  std::cout << "events " << stream.events.size() << ", anomalies " << stream.num_anomalies()
            << '\n';
  return kExitOk;
}

int run_bench(const Common& common, const std::string& spec_path, const std::string& lengths_text,
              const std::string& workers_text, const std::string& partitions_text, int repeats,
              const std::string& output) {
  const auto workers = parse_size_list(workers_text, "--workers-list");
  const auto partitions = parse_size_list(partitions_text, "--partitions-list");
  std::vector<std::uint64_t> lengths;
  if (!lengths_text.empty()) lengths = parse_size_list(lengths_text, "--lengths");
  for (auto w : workers) {
    for (auto k : partitions) {
      PipelineConfig c = common.config;
      c.num_workers = static_cast<std::uint32_t>(w);
      c.num_partitions = static_cast<std::uint32_t>(k);
      c.validate();
    }
  }

  LabeledStream stream = common.input.empty() ? generate_synthetic(parse_synthetic_spec(fs::path(spec_path)))
                                              : load(common);
  if (lengths.empty()) lengths.push_back(stream.events.size());

  std::ostringstream rows;
  rows << "length,workers,partitions,repeat,pass1_ms,prefix_ms,pass2_ms,total_ms,digest\n";
  for (auto n : lengths) {
    if (n > stream.events.size()) {
      throw ConfigError("length " + std::to_string(n) + " exceeds stream size " +
                        std::to_string(stream.events.size()));
    }
    const std::span<const EdgeEvent> prefix(stream.events.data(), n);
    for (auto w : workers) {
      for (auto k : partitions) {
        PipelineConfig c = common.config;
        c.num_workers = static_cast<std::uint32_t>(w);
        c.num_partitions = static_cast<std::uint32_t>(k);
        for (int r = 0; r < repeats; ++r) {
          RunStats stats;
          const auto scores = run_pipeline(prefix, c, &stats);
          char digest[17];
          std::snprintf(digest, sizeof digest, "%016llx",
                        static_cast<unsigned long long>(score_digest(scores)));
          rows << n << ',' << w << ',' << k << ',' << r << ',' << format_double(stats.pass1_millis)
               << ',' << format_double(stats.prefix_millis) << ','
               << format_double(stats.pass2_millis) << ',' << format_double(stats.total_millis)
               << ',' << digest << '\n';
        }
      }
    }
  }
  write_file(output, [&](std::ostream& out) { out << rows.str(); });
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partition-parallel sketch-based anomaly scoring for edge streams"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mdistrib 0.1.0");

  Common common;
  if (const char* env = std::getenv("MDISTRIB_WORKERS"); env && *env) {
    const std::string text(env);
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(text, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != text.size() || v == 0 || v > 4096) {
      std::cerr << "error: MDISTRIB_WORKERS must be an integer in [1, 4096], got '" << text
                << "'\n";
      return kExitUsage;
    }
    common.config.num_workers = static_cast<std::uint32_t>(v);
  }

  std::string output = "-";
  std::string timing;
  std::string node_map;
  auto* score = app.add_subcommand("score", "Score every edge of a CSV log");
  add_input_flags(*score, common, false);
  add_pipeline_flags(*score, common.config);
  score->add_option("--output", output, "Score CSV path ('-' for stdout)")->capture_default_str();
  score->add_option("--timing", timing, "Per-partition timing CSV path");
  score->add_option("--node-map", node_map, "id,name CSV path");

  int repeats = 1;
  std::string report_jsonl;
  std::string report_csv;
  std::string dataset;
  std::string eval_output;
  auto* eval = app.add_subcommand("eval", "Score a labeled log and report ROC-AUC and timings");
  add_input_flags(*eval, common, true);
  add_pipeline_flags(*eval, common.config);
  eval->add_option("--repeats", repeats, "Timed runs")->capture_default_str()->check(CLI::PositiveNumber);
  eval->add_option("--report-jsonl", report_jsonl, "JSON-lines report path");
  eval->add_option("--report-csv", report_csv, "AUC-vs-time CSV path");
  eval->add_option("--dataset", dataset,
                   "Dataset name (darpa, cic-ddos, cic-ids, ctu-13, iscx-ids); warns when the "
                   "AUC deviates from the published value by more than 0.03");
  eval->add_option("--output", eval_output, "Also write the score CSV here");

  std::string spec_path;
  std::string out_edges;
  std::string out_labels;
  auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic stream with bursts");
  synth->add_option("--spec", spec_path, "Spec file (key=value lines)")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("--out-edges", out_edges, "Edge CSV output path")->required();
  synth->add_option("--out-labels", out_labels, "Label output path")->required();

  std::string bench_spec;
  std::string lengths;
  std::string workers_list = "1";
  std::string partitions_list = "8";
  int bench_repeats = 1;
  std::string bench_output = "-";
  auto* bench = app.add_subcommand("bench", "Time the pipeline over a length x workers x partitions grid");
  auto* bench_input = bench->add_option("--input", common.input, "Edge CSV")->check(CLI::ExistingFile);
  auto* bench_spec_opt = bench->add_option("--spec", bench_spec, "Synthetic spec instead of --input")
                             ->check(CLI::ExistingFile);
  bench_input->excludes(bench_spec_opt);
  bench->add_flag("--header", common.header, "Skip the first line of the edge CSV");
  add_pipeline_flags(*bench, common.config);
  bench->add_option("--lengths", lengths, "Comma-separated prefix lengths (default: whole stream)");
  bench->add_option("--workers-list", workers_list, "Comma-separated worker counts")
      ->capture_default_str();
  bench->add_option("--partitions-list", partitions_list, "Comma-separated partition counts")
      ->capture_default_str();
  bench->add_option("--repeats", bench_repeats, "Runs per grid point")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench->add_option("--output", bench_output, "Timing CSV path ('-' for stdout)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*bench && common.input.empty() && bench_spec.empty()) {
      throw ConfigError("bench needs --input or --spec");
    }
    if (!*synth) common.config.validate();

    if (*score) return run_score(common, output, timing, node_map);
    if (*eval) return run_eval(common, repeats, report_jsonl, report_csv, dataset, eval_output);
    if (*synth) return run_synth(spec_path, out_edges, out_labels);
    if (*bench) {
      return run_bench(common, bench_spec, lengths, workers_list, partitions_list, bench_repeats,
                       bench_output);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::domain_error& e) {
    // e.g. AUC over a single-class label file
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
