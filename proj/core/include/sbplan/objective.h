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

#ifndef SBPLAN_OBJECTIVE_H_
#define SBPLAN_OBJECTIVE_H_

#include <functional>
#include <vector>

#include "sbplan/conditioning.h"
#include "sbplan/denoiser.h"
#include "sbplan/types.h"

namespace sbplan {

// Network inputs and regression targets for one batch. `t` holds the
// network step index in [0, N).
struct TrainingBatch {
  std::vector<Matrix> inputs;
  std::vector<Matrix> targets;
  std::vector<Matrix> masks;  // 1 = counted, 0 = conditioned
  std::vector<int> t;

  int size() const { return static_cast<int>(inputs.size()); }
};

struct LossResult {
  // Batch mean of each item's masked squared error sum.
  double sum_sq = 0.0;
  // sum_sq divided by the masked entry count per item; gradients refer to it.
  double mse = 0.0;
  Vector grad;  // empty unless requested
};

LossResult EvaluateLoss(const EpsilonModel& model, const TrainingBatch& batch);
LossResult LossAndGradient(const DenoiserNetwork& net,
                           const TrainingBatch& batch);

struct SampleOptions {
  // Clamp each reconstructed x0 to [-1, 1] before it is used.
  bool clip_denoised = false;
};

// Sampler instrumentation: counts network calls and optionally observes the
// iterate after each update (with conditioning already applied).
struct SampleTrace {
  int nfe = 0;
  std::function<void(int t, const Matrix& x)> on_step;
};

}  // namespace sbplan

#endif  // SBPLAN_OBJECTIVE_H_
