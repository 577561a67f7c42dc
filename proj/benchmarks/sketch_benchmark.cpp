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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "mdistrib/count_min_sketch.hpp"
#include "mdistrib/frequent_items_sketch.hpp"

namespace {

std::vector<mdistrib::SketchKey> make_keys(std::size_t n, std::uint64_t distinct) {
  std::mt19937_64 rng(7);
  std::vector<mdistrib::SketchKey> keys(n);
  for (auto& k : keys) k = mdistrib::SketchKey::edge(rng() % distinct, rng() % 4);
  return keys;
}

void BM_CountMinUpdate(benchmark::State& state) {
  const auto keys = make_keys(1 << 16, 10000);
  mdistrib::CountMinSketch s(static_cast<std::uint32_t>(state.range(0)), 719, 42);
  std::size_t i = 0;
  for (auto _ : state) {
    s.update(keys[i++ & 0xffff]);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CountMinUpdate)->Arg(2)->Arg(4)->Arg(8);

void BM_CountMinEstimate(benchmark::State& state) {
  const auto keys = make_keys(1 << 16, 10000);
  mdistrib::CountMinSketch s(2, 719, 42);
  for (const auto& k : keys) s.update(k);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.estimate(keys[i++ & 0xffff]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CountMinEstimate);

void BM_CountMinMerge(benchmark::State& state) {
  mdistrib::CountMinSketch a(2, 719, 42), b(2, 719, 42);
  for (const auto& k : make_keys(10000, 1000)) b.update(k);
  for (auto _ : state) {
    a.merge(b);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_CountMinMerge);

void BM_FrequentItemsUpdate(benchmark::State& state) {
  const auto keys = make_keys(1 << 16, static_cast<std::uint64_t>(state.range(1)));
  mdistrib::FrequentItemsSketch s(static_cast<std::uint32_t>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) {
    s.update(keys[i++ & 0xffff]);
  }
  state.SetItemsProcessed(state.iterations());
  state.counters["purges"] = static_cast<double>(s.num_purges());
}
BENCHMARK(BM_FrequentItemsUpdate)->Args({1024, 500})->Args({1024, 100000})->Args({64, 100000});

}  // namespace
