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

#ifndef SBPLAN_TRAINING_H_
#define SBPLAN_TRAINING_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "sbplan/ddpm.h"
#include "sbplan/denoiser.h"
#include "sbplan/optimizer.h"
#include "sbplan/planner.h"
#include "sbplan/prior_network.h"
#include "sbplan/priors.h"
#include "sbplan/trajectory.h"

namespace sbplan {

struct TrainSpec {
  Engine engine = Engine::kDdpm;
  int n_steps = 16;
  ScheduleKind schedule = ScheduleKind::kCosine;
  DenoiserConfig net;
  int64_t steps = 0;
  int batch = 32;
  AdamConfig adam;
  uint64_t seed = 0;
};

// Called after every optimizer step with (step index from 1, mse).
using ProgressFn = std::function<void(int64_t, double)>;

struct TrainOutcome {
  DenoiserNetwork net;
  std::vector<double> loss;  // one mse per step
  int64_t skipped = 0;
};

// Trains a denoiser on normalized dataset segments. For the bridge engine
// `prior` supplies X1 for each target from the target's own endpoints.
TrainOutcome TrainDenoiser(const Dataset& dataset, const TrainSpec& spec,
                           const PriorSampler* prior = nullptr,
                           const ProgressFn& progress = {});

struct PriorTrainOutcome {
  PriorNetwork net;
  std::vector<double> loss;
};

// Fits the prior network to whole normalized segments from their endpoint
// states with a plain mean squared error.
PriorTrainOutcome TrainPriorNetwork(const Dataset& dataset, int64_t steps,
                                    int batch, const AdamConfig& adam,
                                    uint64_t seed,
                                    const ProgressFn& progress = {});

}  // namespace sbplan

#endif  // SBPLAN_TRAINING_H_
