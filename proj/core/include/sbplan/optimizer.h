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

#ifndef SBPLAN_OPTIMIZER_H_
#define SBPLAN_OPTIMIZER_H_

#include <cstdint>

#include "sbplan/types.h"

namespace sbplan {

struct AdamConfig {
  double learning_rate = 2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double clip_norm = 1.0;  // <= 0 disables clipping
};

struct TrainerState {
  int64_t step = 0;
  int64_t skipped = 0;
  Vector m;
  Vector v;
  uint64_t seed = 0;
};

enum class StepOutcome { kApplied, kSkippedNonFinite };

class Adam {
 public:
  Adam(int num_params, const AdamConfig& config = {}, uint64_t seed = 0);

  const AdamConfig& config() const { return config_; }
  const TrainerState& state() const { return state_; }

  // Applies one clipped, bias-corrected update. A gradient containing NaN or
  // Inf leaves params and moments untouched and is counted in skipped.
  StepOutcome Step(Vector& params, const Vector& grad);

 private:
  AdamConfig config_;
  TrainerState state_;
};

}  // namespace sbplan

#endif  // SBPLAN_OPTIMIZER_H_
