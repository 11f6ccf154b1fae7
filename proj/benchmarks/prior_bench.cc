// Copyright 2026 The SBPlan Authors
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

#include "bench_util.h"
#include "sbplan/prior_network.h"
#include "sbplan/priors.h"

namespace sbplan {
namespace {

const Vec4 kStart(-0.6, -0.4, 0.0, 0.0);
const Vec4 kGoal(0.5, 0.7, 0.0, 0.0);

void BM_Prior(benchmark::State& state, PriorKind kind) {
  const Dataset& ds = bench::UmazeData();
  const PriorSampler prior(kind, ds.stats, bench::kDataHorizon);
  Rng rng(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(prior.Sample(kStart, kGoal, rng));
  }
}
BENCHMARK_CAPTURE(BM_Prior, gaussian, PriorKind::kGaussian);
BENCHMARK_CAPTURE(BM_Prior, straight_line, PriorKind::kStraightLine);

void BM_PriorLearned(benchmark::State& state) {
  const Dataset& ds = bench::UmazeData();
  PriorNetwork net(bench::kDataHorizon);
  net.InitRandom(5);
  const PriorSampler prior(net, ds.stats);
  Rng rng(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(prior.Sample(kStart, kGoal, rng));
  }
}
BENCHMARK(BM_PriorLearned);

// Reference point for the prior costs above.
void BM_PriorCostRatio(benchmark::State& state) {
  const Dataset& ds = bench::UmazeData();
  const DenoiserNetwork ref = bench::MakeNet(bench::kDataHorizon);
  PriorNetwork net(bench::kDataHorizon);
  net.InitRandom(5);
  const PriorSampler learned(net, ds.stats);
  const PriorSampler straight(PriorKind::kStraightLine, ds.stats,
                              bench::kDataHorizon);
  PriorCostReport lr, sr;
  for (auto _ : state) {
    sr = MeasurePriorCost(straight, 1000, ref);
    lr = MeasurePriorCost(learned, 1000, ref);
  }
  state.counters["straight_ratio"] = sr.ratio;
  state.counters["learned_ratio"] = lr.ratio;
}
BENCHMARK(BM_PriorCostRatio)->Iterations(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace sbplan
