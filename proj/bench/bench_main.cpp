// Copyright 2026 The Fragscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference against OpenMP kernels, plus the end-to-end hot paths.

#include <benchmark/benchmark.h>

#include <random>

#include "fragscope/app.hpp"
#include "fragscope/crawl.hpp"
#include "fragscope/histogram.hpp"
#include "fragscope/mutation.hpp"
#include "fragscope/tree.hpp"

namespace {

using namespace fragscope;

const std::string kDir = std::string(FIXTURE_DIR) + "/addressbook-mini/";

Raster noise(int w, int h) {
  Raster r(w, h);
  std::mt19937_64 rng(1);
  for (auto& p : r.pixels) p = static_cast<std::uint8_t>(rng());
  return r;
}

void BM_HistogramSerial(benchmark::State& st) {
  Raster r = noise(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(histogram(r));
  st.SetItemsProcessed(st.iterations() * st.range(0) * st.range(0));
}
BENCHMARK(BM_HistogramSerial)->Arg(256)->Arg(1024)->Arg(2048);

void BM_HistogramParallel(benchmark::State& st) {
  Raster r = noise(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(histogram_parallel(r));
  st.SetItemsProcessed(st.iterations() * st.range(0) * st.range(0));
}
BENCHMARK(BM_HistogramParallel)->Arg(256)->Arg(1024)->Arg(2048);

std::vector<SnapshotPair> fixture_pairs() {
  std::vector<SnapshotPtr> snaps;
  for (const char* n : {"s1", "s2", "s3", "s5", "s6", "s7", "s1b", "s1c", "s2b"}) {
    snaps.push_back(std::make_shared<const Snapshot>(load_snapshot(kDir + "snapshots/" + n + ".json")));
  }
  std::vector<SnapshotPair> pairs;
  for (const auto& a : snaps) {
    for (const auto& b : snaps) pairs.push_back({a, b});
  }
  return pairs;
}

void BM_PairDistancesSerial(benchmark::State& st) {
  auto pairs = fixture_pairs();
  SafKind kind = st.range(0) ? SafKind::kVisual : SafKind::kStructural;
  for (auto _ : st) benchmark::DoNotOptimize(pair_distances(kind, pairs));
}
BENCHMARK(BM_PairDistancesSerial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PairDistancesParallel(benchmark::State& st) {
  auto pairs = fixture_pairs();
  SafKind kind = st.range(0) ? SafKind::kVisual : SafKind::kStructural;
  for (auto _ : st) benchmark::DoNotOptimize(pair_distances_parallel(kind, pairs));
}
BENCHMARK(BM_PairDistancesParallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_TreeEditDistance(benchmark::State& st) {
  std::mt19937_64 rng(3);
  auto build = [&](int n) {
    LabeledTree t;
    for (int i = 0; i < n; ++i) t.add(std::string(1, static_cast<char>('a' + rng() % 4)), i ? static_cast<int>(rng() % i) : -1);
    return t;
  };
  LabeledTree a = build(static_cast<int>(st.range(0)));
  LabeledTree b = build(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(tree_edit_distance(a, b));
}
BENCHMARK(BM_TreeEditDistance)->Arg(30)->Arg(100)->Arg(300)->Unit(benchmark::kMicrosecond);

void BM_FragmentCrawl(benchmark::State& st) {
  SimApp app = load_app(kDir + "app.json");
  for (auto _ : st) benchmark::DoNotOptimize(crawl(app, CrawlConfig{}));
}
BENCHMARK(BM_FragmentCrawl)->Unit(benchmark::kMillisecond);

void BM_Mutation(benchmark::State& st) {
  SimApp app = load_app(kDir + "app.json");
  AppModel m = crawl(app, CrawlConfig{});
  auto trace = record_trace(m, app);
  auto none = record_trace(m, app, 77);
  MutationConfig cfg;
  cfg.mutants = 100;
  cfg.structural = {SafKind::kStructural, 0.001, 0.05};
  cfg.visual = {SafKind::kVisual, 0.0001, 0.01};
  bool parallel = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(run_mutation_experiment(m, trace, none, cfg, parallel));
}
BENCHMARK(BM_Mutation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
