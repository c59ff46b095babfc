// Copyright (c) 2026 The Sparsefold Authors. All Rights Reserved.
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

#include <benchmark/benchmark.h>

#include <string>

#include "sparsefold/network.hpp"
#include "sparsefold/report.hpp"
#include "sparsefold/schedule.hpp"

namespace sparsefold {
namespace {

const std::string kConfig = std::string(SPARSEFOLD_CONFIG_DIR) + "/enet512.json";

void BM_AnalyzeShippedNetwork(benchmark::State& state) {
  const auto cfg = load_config(kConfig);
  for (auto _ : state) benchmark::DoNotOptimize(analyze(cfg));
}
BENCHMARK(BM_AnalyzeShippedNetwork)->Unit(benchmark::kMicrosecond);

void BM_EnumerateDilated(benchmark::State& state) {
  const auto layer = LayerSpec::dilated(4, 8, 64, 64, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const auto trace = enumerate_schedule(layer, {});
    benchmark::DoNotOptimize(trace.cycles());
  }
}
BENCHMARK(BM_EnumerateDilated)->Arg(1)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_EnumerateTransposed(benchmark::State& state) {
  const auto layer = LayerSpec::transposed(4, 8, 64, 64, true);
  for (auto _ : state) {
    const auto trace = enumerate_schedule(layer, {});
    benchmark::DoNotOptimize(trace.cycles());
  }
}
BENCHMARK(BM_EnumerateTransposed)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace sparsefold
