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

#ifndef SBPLAN_BENCHMARKS_BENCH_UTIL_H_
#define SBPLAN_BENCHMARKS_BENCH_UTIL_H_

#include "sbplan/dataset_gen.h"
#include "sbplan/denoiser.h"

namespace sbplan::bench {

// Full-size denoiser at the given horizon.
inline DenoiserNetwork MakeNet(int horizon) {
  DenoiserConfig cfg;
  cfg.horizon = horizon;
  DenoiserNetwork net(cfg);
  net.InitRandom(1);
  return net;
}

inline constexpr int kDataHorizon = 128;

// Small umaze dataset, generated once per process.
inline const Dataset& UmazeData() {
  static const Dataset ds = [] {
    GenConfig cfg;
    cfg.maze_id = "umaze";
    cfg.horizon = kDataHorizon;
    cfg.total_steps = 20000;
    cfg.seed = 1;
    return Generate(cfg);
  }();
  return ds;
}

}  // namespace sbplan::bench

#endif  // SBPLAN_BENCHMARKS_BENCH_UTIL_H_
