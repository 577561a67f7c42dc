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

#include <benchmark/benchmark.h>

#include "mdistrib/ingest.hpp"
#include "mdistrib/pipeline.hpp"

namespace {

const mdistrib::LabeledStream& stream() {
  static const mdistrib::LabeledStream s = [] {
    mdistrib::SyntheticSpec spec;
    spec.num_nodes = 5000;
    spec.num_ticks = 256;
    spec.base_rate = 1024;
    spec.bursts = {{10, 3, 100, 10}};
    return mdistrib::generate_synthetic(spec);
  }();
  return s;
}

void run(benchmark::State& state, mdistrib::PipelineConfig c) {
  const auto& events = stream().events;
  const auto n = std::min<std::size_t>(events.size(), static_cast<std::size_t>(state.range(0)));
  c.num_workers = static_cast<std::uint32_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mdistrib::run_pipeline(std::span(events).first(n), c));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_PipelineCmsRelational(benchmark::State& state) { run(state, {}); }
BENCHMARK(BM_PipelineCmsRelational)
    ->ArgsProduct({benchmark::CreateRange(1 << 12, 1 << 18, 4), {1, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

void BM_PipelineFisRelational(benchmark::State& state) {
  mdistrib::PipelineConfig c;
  c.variant = mdistrib::SketchVariant::fis;
  run(state, c);
}
BENCHMARK(BM_PipelineFisRelational)
    ->ArgsProduct({benchmark::CreateRange(1 << 12, 1 << 18, 4), {1, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

void BM_PipelinePerPartitionQuery(benchmark::State& state) {
  mdistrib::PipelineConfig c;
  c.query_mode = mdistrib::QueryMode::per_partition;
  c.num_partitions = 64;
  run(state, c);
}
BENCHMARK(BM_PipelinePerPartitionQuery)
    ->Args({1 << 16, 1})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
